"""Deformed bosonic oscillators: eigenfunctions, moments and truncated Fock-space checks."""

import json as _json

from ._core import (  # noqa: F401
    AdmissibilityError,
    ChangeOfVariable,
    ConfigError,
    ConstraintError,
    CParams,
    EigenState,
    HamCoeffs,
    MomentReport,
    ParameterRangeError,
    PresetKind,
    SpectrumError,
    TruncatedOperators,
    build_truncated,
    change_of_variable,
    coeffs_from_c,
    commutator_residual,
    constraint_residual,
    discrepancy_report,
    energy,
    gram_matrix,
    ground_moments_closed,
    is_admissible,
    is_mutually_adjoint,
    is_selfadjoint,
    moments,
    normalize,
    preset,
    printed_variance_lambda_shift,
    scan_csv,
    sign_changes,
    spectrum,
    squeezing_window,
    variance_lambda_shift_oracle,
    wigner_residuals,
)
from ._core import verify_json as _core_verify

__version__ = "0.1.0"


def _config_text(config):
    if isinstance(config, str):
        return config
    return _json.dumps({"schema": 1, **config})


def verify(config):
    """Run the verification suites; `config` is a dict or JSON text in the CLI config schema."""
    return _json.loads(_core_verify(_config_text(config)))


def scan(config):
    """CSV moment table for a config dict or JSON text."""
    return scan_csv(_config_text(config))

