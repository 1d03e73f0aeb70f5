#pragma once

#include <array>
#include <random>
#include <string>
#include <string_view>

namespace oscdeform {

inline constexpr double kConstraintTolerance = 1e-12;
inline constexpr double kSymmetryTolerance = 1e-12;

/// Coefficients of the deformed ladder operators
///   b  = (1 + c1) a + c2 a† + c3,
///   b† = c4 a + (1 + c5) a† + c6.
/// A valid set satisfies c1 + c5 + c1 c5 - c2 c4 = 0, which is [b, b†] = 1.
struct CParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double c5 = 0.0;
  double c6 = 0.0;

  [[nodiscard]] std::array<double, 6> as_array() const { return {c1, c2, c3, c4, c5, c6}; }
  static CParams from_array(const std::array<double, 6>& c) {
    return {c[0], c[1], c[2], c[3], c[4], c[5]};
  }
  bool operator==(const CParams&) const = default;
};

/// Coefficients of H = A d²/dx² + (B x + C) d/dx + D x² + E x + F.
struct HamCoeffs {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double E = 0.0;
  double F = 0.0;
  bool operator==(const HamCoeffs&) const = default;
};

enum class PresetKind { harmonic, lambda_shift, case_i, case_ii, case_iii };

struct PresetId {
  PresetKind kind = PresetKind::harmonic;
  double lambda = 0.0;
};

/// c1 + c5 + c1 c5 - c2 c4. Zero iff the sextuple is a valid CParams.
double constraint_residual(const CParams& c);
bool satisfies_constraint(const CParams& c, double tol = kConstraintTolerance);

/// Throws ConstraintError when the constraint residual exceeds tolerance.
HamCoeffs coeffs_from_c(const CParams& c);

/// Square integrability of the eigenfunctions: A < 0 and B < 1.
bool is_admissible(const HamCoeffs& h);
/// Throws AdmissibilityError naming the first violated inequality.
void require_admissible(const HamCoeffs& h);

/// H† = H exactly when the first-derivative term vanishes (B = C = 0).
bool is_selfadjoint(const HamCoeffs& h, double tol = kSymmetryTolerance);

/// (b†)† = b, i.e. c1 = c5, c2 = c4, c3 = c6.
bool is_mutually_adjoint(const CParams& c, double tol = kSymmetryTolerance);

/// Named deformations. Throws ParameterRangeError when lambda lies outside the
/// preset's validity range (case_ii: lambda > 0; case_iii: -1 < lambda < 1).
CParams preset(const PresetId& id);

std::string_view preset_name(PresetKind kind);
/// Throws std::invalid_argument for unknown names.
PresetKind parse_preset(std::string_view name);

struct LambdaDomain {
  double lo;  // exclusive bound, -inf when unbounded
  double hi;  // exclusive bound, +inf when unbounded
  [[nodiscard]] bool contains(double lambda) const { return lambda > lo && lambda < hi; }
};
LambdaDomain lambda_domain(PresetKind kind);

/// Uniform draw of c1, c2, c3, c4, c6 in [-half_width, half_width], then c5 solved from the
/// constraint. Draws with |1 + c1| < 1e-3 are redrawn.
CParams sample_constrained(std::mt19937_64& rng, double half_width = 0.5);

/// Random constrained sextuple that is also mutually adjoint (a Bogoliubov pair plus a shift):
/// c2 = c4 = nu, c1 = c5 = sqrt(1 + nu^2) - 1, c3 = c6.
CParams sample_mutually_adjoint(std::mt19937_64& rng, double half_width = 1.0);

/// Constrained sample whose coefficients sit well inside the admissible region
/// (A <= -margin and B <= 1 - margin), so closed forms are not cancellation dominated.
CParams sample_admissible(std::mt19937_64& rng, double half_width = 0.5, double margin = 0.05);

}  // namespace oscdeform
