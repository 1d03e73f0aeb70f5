#include "oscdeform/deformation.hpp"

#include "oscdeform/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace oscdeform {

double constraint_residual(const CParams& c) {
  return c.c1 + c.c5 + c.c1 * c.c5 - c.c2 * c.c4;
}

bool satisfies_constraint(const CParams& c, double tol) {
  return std::abs(constraint_residual(c)) <= tol;
}

HamCoeffs coeffs_from_c(const CParams& c) {
  const double r = constraint_residual(c);
  if (!(std::abs(r) <= kConstraintTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "c-parameters violate c1 + c5 + c1*c5 - c2*c4 = 0 (residual " << r << ")";
    throw ConstraintError(msg.str());
  }
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const double mu1 = 1.0 + c.c1;
  const double mu5 = 1.0 + c.c5;
  HamCoeffs h;
  h.A = -0.5 - c.c2 * c.c4 + 0.5 * c.c4 * mu1 + 0.5 * c.c2 * mu5;
  h.B = c.c4 * mu1 - c.c2 * mu5;
  h.C = inv_sqrt2 * (c.c6 * (c.c1 - c.c2 + 1.0) + c.c3 * (c.c4 - c.c5 - 1.0));
  h.D = 0.5 + c.c2 * c.c4 + 0.5 * c.c4 * mu1 + 0.5 * c.c2 * mu5;
  h.E = inv_sqrt2 * (c.c6 * (c.c1 + c.c2 + 1.0) + c.c3 * (c.c4 + c.c5 + 1.0));
  h.F = 0.5 * c.c4 * mu1 - 0.5 * c.c2 * mu5 + c.c3 * c.c6;
  return h;
}

bool is_admissible(const HamCoeffs& h) { return h.A < 0.0 && h.B < 1.0; }

void require_admissible(const HamCoeffs& h) {
  std::ostringstream msg;
  msg.precision(17);
  if (!(h.A < 0.0)) {
    msg << "admissibility A<0 violated (A = " << h.A << ")";
    throw AdmissibilityError(msg.str());
  }
  if (!(h.B < 1.0)) {
    msg << "admissibility B<1 violated (B = " << h.B << ")";
    throw AdmissibilityError(msg.str());
  }
}

bool is_selfadjoint(const HamCoeffs& h, double tol) {
  return std::abs(h.B) <= tol && std::abs(h.C) <= tol;
}

bool is_mutually_adjoint(const CParams& c, double tol) {
  return std::abs(c.c1 - c.c5) <= tol && std::abs(c.c2 - c.c4) <= tol &&
         std::abs(c.c3 - c.c6) <= tol;
}

std::string_view preset_name(PresetKind kind) {
  switch (kind) {
    case PresetKind::harmonic: return "harmonic";
    case PresetKind::lambda_shift: return "lambda_shift";
    case PresetKind::case_i: return "case_i";
    case PresetKind::case_ii: return "case_ii";
    case PresetKind::case_iii: return "case_iii";
  }
  return "unknown";
}

PresetKind parse_preset(std::string_view name) {
  for (auto k : {PresetKind::harmonic, PresetKind::lambda_shift, PresetKind::case_i,
                 PresetKind::case_ii, PresetKind::case_iii}) {
    if (preset_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) +
                              "' (expected harmonic, lambda_shift, case_i, case_ii, case_iii)");
}

LambdaDomain lambda_domain(PresetKind kind) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case PresetKind::case_ii: return {0.0, inf};
    case PresetKind::case_iii: return {-1.0, 1.0};
    default: return {-inf, inf};
  }
}

CParams preset(const PresetId& id) {
  const double lam = id.lambda;
  if (!std::isfinite(lam)) throw ParameterRangeError("lambda must be finite");
  switch (id.kind) {
    case PresetKind::harmonic:
      return {};
    case PresetKind::lambda_shift: {
      CParams c;
      c.c6 = lam;
      return c;
    }
    case PresetKind::case_i: {
      CParams c;
      c.c1 = c.c5 = 2.0 / 3.0;
      c.c2 = c.c4 = 4.0 / 3.0;
      c.c3 = c.c6 = lam;
      return c;
    }
    case PresetKind::case_ii: {
      if (!(lam > 0.0)) {
        std::ostringstream msg;
        msg << "case_ii requires lambda > 0 (got " << lam << ")";
        throw ParameterRangeError(msg.str());
      }
      const double s = std::sqrt(lam);
      CParams c;
      c.c1 = c.c5 = (s - 1.0) * (s - 1.0) / (2.0 * s);
      c.c2 = c.c4 = (lam - 1.0) / (2.0 * s);
      return c;
    }
    case PresetKind::case_iii: {
      if (!(lam > -1.0 && lam < 1.0)) {
        std::ostringstream msg;
        msg << "case_iii requires -1 < lambda < 1 (got " << lam << "): ";
        if (lam >= 1.0)
          msg << "admissibility A<0 violated (A = " << 0.5 * (lam - 1.0) << ")";
        else
          msg << "admissibility B<1 violated (B = " << -lam << ")";
        throw ParameterRangeError(msg.str());
      }
      CParams c;
      c.c2 = lam;
      return c;
    }
  }
  throw std::invalid_argument("unknown preset kind");
}

CParams sample_constrained(std::mt19937_64& rng, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  for (;;) {
    CParams c;
    c.c1 = u(rng);
    c.c2 = u(rng);
    c.c3 = u(rng);
    c.c4 = u(rng);
    c.c6 = u(rng);
    if (std::abs(1.0 + c.c1) < 1e-3) continue;
    // (1 + c1)(1 + c5) = 1 + c2 c4
    c.c5 = (c.c2 * c.c4 - c.c1) / (1.0 + c.c1);
    return c;
  }
}

CParams sample_mutually_adjoint(std::mt19937_64& rng, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  const double nu = u(rng);
  const double shift = u(rng);
  CParams c;
  c.c2 = c.c4 = nu;
  // sqrt(1 + nu^2) - 1 without cancellation
  c.c1 = c.c5 = nu * nu / (std::sqrt(1.0 + nu * nu) + 1.0);
  c.c3 = c.c6 = shift;
  return c;
}

CParams sample_admissible(std::mt19937_64& rng, double half_width, double margin) {
  for (;;) {
    const CParams c = sample_constrained(rng, half_width);
    const HamCoeffs h = coeffs_from_c(c);
    if (h.A <= -margin && h.B <= 1.0 - margin) return c;
  }
}

}  // namespace oscdeform
