#pragma once

#include "oscdeform/deformation.hpp"
#include "oscdeform/specialfn.hpp"

#include <Eigen/Dense>

#include <vector>

namespace oscdeform {

/// x = p y + q maps position onto the Hermite argument y.
struct ChangeOfVariable {
  double p = 1.0;  // > 0
  double q = 0.0;
};

/// p = sqrt(-2A), q = 2EA - BC. Throws AdmissibilityError for inadmissible input.
ChangeOfVariable change_of_variable(const HamCoeffs& h);

/// General level formula
///   F - B/2 - C²/(4A) - (A/p²)(2n+1) + q²(D - B²/(4A)) + q(E - BC/(2A)),
/// evaluated term by term. Equals n + 1/2 whenever h comes from a valid CParams.
double energy_general(const HamCoeffs& h, const ChangeOfVariable& cov, int n);

/// exp(quad x² + lin x + offset): the n-independent Gaussian factor of every eigenfunction.
struct GaussianEnvelope {
  double quad = 0.0;    // (1 - B) / (4A), negative when admissible
  double lin = 0.0;     // (B - 1) C / (2A) - E
  double offset = 0.0;  // (2EA - BC)² / (4A)

  [[nodiscard]] double exponent(double x) const { return (quad * x + lin) * x + offset; }
  [[nodiscard]] double slope(double x) const { return 2.0 * quad * x + lin; }
  /// Centre of exp(2 * exponent), i.e. of psi².
  [[nodiscard]] double center() const { return -lin / (2.0 * quad); }
};

GaussianEnvelope gaussian_envelope(const HamCoeffs& h);

/// psi_0 = N_0 exp(-alpha x²/2 - beta x - gamma/2).
struct GroundStateForm {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
  double norm = 0.0;  // (alpha/pi)^{1/4} exp((alpha gamma - beta²) / (2 alpha))
};

GroundStateForm ground_state_form(const HamCoeffs& h);

/// Quadrature nodes adapted to the envelope of psi²: x_i = centre + t_i / sqrt(a) with
/// a = -2 quad, so that sum_i w_i f(x_i) approximates sqrt(a) e^{-2 g(centre)} ∫ e^{2g} f dx.
struct EnvelopeNodes {
  std::vector<double> x;
  std::vector<double> w;
  double scale = 1.0;  // sqrt(a)
  double log_peak = 0.0;  // g(centre)
};

EnvelopeNodes envelope_nodes(const HamCoeffs& h, const QuadratureRule& rule = default_rule());

/// Normalized eigenfunction
///   psi_n(x) = N_n exp(quad x² + lin x + offset) H_n((x - q)/p),  N_n > 0, p > 0.
class EigenState {
 public:
  EigenState(const HamCoeffs& h, int n, const QuadratureRule& rule = default_rule());

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] const HamCoeffs& coeffs() const { return coeffs_; }
  [[nodiscard]] const ChangeOfVariable& cov() const { return cov_; }
  [[nodiscard]] const GaussianEnvelope& envelope() const { return envelope_; }
  [[nodiscard]] double norm() const;
  [[nodiscard]] double log_norm() const { return log_norm_; }

  [[nodiscard]] double hermite_argument(double x) const { return (x - cov_.q) / cov_.p; }

  double operator()(double x) const;
  [[nodiscard]] double derivative(double x) const;
  [[nodiscard]] double second_derivative(double x) const;

  /// |H psi - (n + 1/2) psi| divided by the summed magnitudes of the terms of H psi and
  /// (n + 1/2) psi, plus |A|-weighted magnitudes of H_n, H_n', H_n'' on the length scale p so
  /// the ratio stays defined at the nodes of psi.
  [[nodiscard]] double eigen_equation_residual(double x) const;

 private:
  int n_;
  HamCoeffs coeffs_;
  ChangeOfVariable cov_;
  GaussianEnvelope envelope_;
  double log_norm_;
};

double eval_eigenfunction(const EigenState& state, double x);

/// N_n with ∫ psi_n² dx = 1, by Gauss-Hermite quadrature on the completed square.
/// Throws AdmissibilityError for inadmissible input and std::domain_error if the norm
/// integral is not finite and positive.
double normalize(const HamCoeffs& h, int n, const QuadratureRule& rule = default_rule());
double log_normalize(const HamCoeffs& h, int n, const QuadratureRule& rule = default_rule());

/// G[m][n] = ∫ psi_m psi_n dx for m, n = 0..n_max.
Eigen::MatrixXd gram_matrix(const HamCoeffs& h, int n_max,
                            const QuadratureRule& rule = default_rule());

/// Position mean and spread of psi_n², by quadrature.
struct PositionSpread {
  double mean = 0.0;
  double sigma = 0.0;
};
PositionSpread position_spread(const EigenState& state,
                               const QuadratureRule& rule = default_rule());

/// Sign changes of psi on an even grid of `samples` points spanning mean ± half_width_sigmas·sigma
/// and the interval q ± p·sqrt(2n+2) that contains every zero of H_n((x-q)/p).
int sign_changes(const EigenState& state, double half_width_sigmas = 6.0, int samples = 4001);

/// Largest eigen_equation_residual on an even grid over mean ± half_width_sigmas·sigma.
double max_eigen_equation_residual(const EigenState& state, double half_width_sigmas = 6.0,
                                   int samples = 801);

// Closed-form normalization constants of the named families.

/// b, b† a Bogoliubov pair with shift: N_n = sqrt(3) pi^{-1/4} 2^{-n/2} / sqrt(n!).
double norm_case_i(int n);
/// N_n = lambda^{1/4} pi^{-1/4} 2^{-n/2} / sqrt(n!).
double norm_case_ii(int n, double lambda);
/// N_n = pi^{-1/4} / n! · ((1+lambda)/(1-lambda))^{1/4} (1+lambda)^{n/2} F_n(lambda)^{-1/2}.
double norm_case_iii(int n, double lambda);
/// Prefactor of exp(-x²/2) H_n(x + lambda/sqrt 2):
/// 2^{-n/2} pi^{-1/4} / (sqrt(n!) sqrt(L_n(-lambda²))).
double norm_lambda_shift(int n, double lambda);

// Ladder actions on the eigenfunctions.

/// (b psi)(x) with b = (1+c1) a + c2 a† + c3 and a = (d/dx + x)/sqrt 2.
double apply_lowering(const CParams& c, const EigenState& state, double x);
/// (b† psi)(x) with b† = c4 a + (1+c5) a† + c6.
double apply_raising(const CParams& c, const EigenState& state, double x);

/// k with b psi_n = k psi_{n-1}: n / sqrt(-A) · N_n/N_{n-1} · (1 + c1 - c2).
double lowering_constant_closed(const CParams& c, int n,
                                const QuadratureRule& rule = default_rule());
/// k with b† psi_n = k psi_{n+1}: 1/(2 sqrt(-A)) · N_n/N_{n+1} · (1 + c5 - c4).
double raising_constant_closed(const CParams& c, int n,
                               const QuadratureRule& rule = default_rule());

/// Least-squares k and relative residual of b psi_n ≈ k psi_{n-1}, by quadrature.
struct LadderFit {
  double constant = 0.0;
  double relative_residual = 0.0;
};
LadderFit lowering_constant_measured(const CParams& c, int n,
                                     const QuadratureRule& rule = default_rule());
LadderFit raising_constant_measured(const CParams& c, int n,
                                    const QuadratureRule& rule = default_rule());

}  // namespace oscdeform
