#pragma once

#include "oscdeform/deformation.hpp"
#include "oscdeform/specialfn.hpp"

#include <optional>
#include <vector>

namespace oscdeform {

/// Squeezing is declared only when a variance falls below 1/2 by more than this dead-band,
/// so the coherent boundary var = 1/2 classifies as not squeezed.
inline constexpr double kSqueezeDeadband = 1e-12;
inline constexpr double kCoherenceTolerance = 1e-9;

/// Position/momentum moments of a real eigenfunction (hbar = omega = m = 1).
struct MomentReport {
  double mean_x = 0.0;
  double mean_x2 = 0.0;
  double mean_p = 0.0;  // identically zero for real wavefunctions
  double mean_p2 = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
  double product = 0.0;  // Δx·Δp
  bool squeezed_x = false;
  bool squeezed_p = false;
  bool coherent = false;
};

/// Builds a report from <x>, var_x and <p²> (with <p> = 0).
MomentReport make_report(double mean_x, double var_x, double mean_p2);

bool is_squeezed(double variance);

/// Moments of psi_n by Gauss-Hermite quadrature; <p²> = ∫ psi'² dx with psi' analytic.
MomentReport moments_quadrature(const HamCoeffs& h, int n,
                                const QuadratureRule& rule = default_rule());

/// Closed-form ground-state moments:
///   <x> = C + 2EA/(1-B), <x²> = A/(B-1) + <x>², <p²> = (B-1)/(4A).
MomentReport ground_moments_closed(const HamCoeffs& h);

struct SqueezeVerdict {
  bool x = false;
  bool p = false;
};

/// Ground state: x-squeezed iff B < 2A + 1, p-squeezed iff B > 2A + 1.
SqueezeVerdict squeezing_verdict_ground(const HamCoeffs& h);

/// The closed variance formula quoted for the lambda-shifted states
///   2n + 1/2 - (2λ²+1) L_{n-1}^{(1)}/L_n^{(0)} - 2λ² (L_n^{(1)}/L_n^{(0)})²,  Laguerre at -λ².
/// Kept for comparison only: it does not reproduce the oracle below.
double printed_variance_lambda_shift(int n, double lambda);

/// Position variance of exp(-x²/2) H_n(x + λ/√2), by direct quadrature.
double variance_lambda_shift_oracle(int n, double lambda,
                                    const QuadratureRule& rule = default_rule());

struct LambdaGrid {
  double min = 0.0;
  double max = 1.0;
  int steps = 256;
};

/// The grid's lambda values, min + (max - min) i / (steps - 1), with both ends hit exactly.
std::vector<double> grid_points(const LambdaGrid& grid);

/// Connected lambda-interval on which var_x < 1/2. An empty bound means the interval
/// reaches that edge of the scanned grid.
struct SqueezeInterval {
  std::optional<double> lo;
  std::optional<double> hi;
};

struct SqueezingWindow {
  PresetKind preset = PresetKind::harmonic;
  int n = 0;
  LambdaGrid grid;
  double resolution = 1e-6;
  std::vector<SqueezeInterval> intervals;  // empty: no squeezing anywhere on the grid

  [[nodiscard]] bool empty() const { return intervals.empty(); }
  [[nodiscard]] bool contains(double lambda) const;
};

/// var_x of the n-th eigenfunction of a preset at the given lambda.
double preset_variance_x(PresetKind kind, int n, double lambda,
                         const QuadratureRule& rule = default_rule());

/// Sign-change scan of var_x - 1/2 over the grid with bisection-refined boundaries.
/// Throws ParameterRangeError if the grid leaves the preset's lambda domain.
SqueezingWindow squeezing_window_scan(PresetKind kind, int n, const LambdaGrid& grid,
                                      double resolution = 1e-6,
                                      const QuadratureRule& rule = default_rule());

}  // namespace oscdeform
