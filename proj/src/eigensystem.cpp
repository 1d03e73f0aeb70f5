#include "oscdeform/eigensystem.hpp"

#include "oscdeform/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oscdeform {

ChangeOfVariable change_of_variable(const HamCoeffs& h) {
  require_admissible(h);
  return {std::sqrt(-2.0 * h.A), 2.0 * h.E * h.A - h.B * h.C};
}

double energy_general(const HamCoeffs& h, const ChangeOfVariable& cov, int n) {
  require_admissible(h);
  if (n < 0) throw std::invalid_argument("energy_general: n must be non-negative");
  const double p2 = cov.p * cov.p;
  const double curvature = h.D - h.B * h.B / (4.0 * h.A);
  const double tilt = h.E - h.B * h.C / (2.0 * h.A);
  return h.F - h.B / 2.0 - h.C * h.C / (4.0 * h.A) - (h.A / p2) * (2.0 * n + 1.0) +
         cov.q * cov.q * curvature + cov.q * tilt;
}

GaussianEnvelope gaussian_envelope(const HamCoeffs& h) {
  require_admissible(h);
  const double shift = 2.0 * h.E * h.A - h.B * h.C;
  return {(1.0 - h.B) / (4.0 * h.A), (h.B - 1.0) * h.C / (2.0 * h.A) - h.E,
          shift * shift / (4.0 * h.A)};
}

GroundStateForm ground_state_form(const HamCoeffs& h) {
  require_admissible(h);
  GroundStateForm g;
  g.alpha = (h.B - 1.0) / (2.0 * h.A);
  g.beta = h.E - (h.B - 1.0) * h.C / (2.0 * h.A);
  const double shift = 2.0 * h.E * h.A - h.B * h.C;
  g.gamma = -shift * shift / (2.0 * h.A);
  g.norm = std::pow(g.alpha / std::numbers::pi, 0.25) *
           std::exp((g.alpha * g.gamma - g.beta * g.beta) / (2.0 * g.alpha));
  return g;
}

EnvelopeNodes envelope_nodes(const HamCoeffs& h, const QuadratureRule& rule) {
  const GaussianEnvelope env = gaussian_envelope(h);
  EnvelopeNodes out;
  out.scale = std::sqrt(-2.0 * env.quad);
  const double centre = env.center();
  out.log_peak = env.exponent(centre);
  out.x.reserve(rule.nodes.size());
  for (double t : rule.nodes) out.x.push_back(centre + t / out.scale);
  out.w = rule.weights;
  return out;
}

namespace {

double hermite_second_derivative(int n, double y) {
  return n < 2 ? 0.0 : 4.0 * n * (n - 1.0) * hermite(n - 2, y);
}

// Hermite values H_0..H_n(u(x_i)) at every envelope node, row-major by node.
std::vector<double> hermite_table(const EnvelopeNodes& nodes, const ChangeOfVariable& cov,
                                  int n_max) {
  const auto width = static_cast<std::size_t>(n_max + 1);
  std::vector<double> table(nodes.x.size() * width);
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double y = (nodes.x[i] - cov.q) / cov.p;
    hermite_sequence(y, std::span<double>(table.data() + i * width, width));
  }
  return table;
}

}  // namespace

double log_normalize(const HamCoeffs& h, int n, const QuadratureRule& rule) {
  if (n < 0) throw std::invalid_argument("normalize: n must be non-negative");
  const ChangeOfVariable cov = change_of_variable(h);
  const EnvelopeNodes nodes = envelope_nodes(h, rule);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double hn = hermite(n, (nodes.x[i] - cov.q) / cov.p);
    sum += nodes.w[i] * hn * hn;
  }
  const double log_norm = -nodes.log_peak + 0.5 * std::log(nodes.scale) - 0.5 * std::log(sum);
  if (!(sum > 0.0) || !std::isfinite(sum) || !std::isfinite(log_norm))
    throw std::domain_error("normalize: norm integral is not finite and positive");
  return log_norm;
}

double normalize(const HamCoeffs& h, int n, const QuadratureRule& rule) {
  const double n_n = std::exp(log_normalize(h, n, rule));
  if (!(n_n > 0.0) || !std::isfinite(n_n))
    throw std::domain_error("normalize: normalization constant over/underflows");
  return n_n;
}

EigenState::EigenState(const HamCoeffs& h, int n, const QuadratureRule& rule)
    : n_(n),
      coeffs_(h),
      cov_(change_of_variable(h)),
      envelope_(gaussian_envelope(h)),
      log_norm_(log_normalize(h, n, rule)) {}

double EigenState::norm() const { return std::exp(log_norm_); }

double EigenState::operator()(double x) const {
  return std::exp(log_norm_ + envelope_.exponent(x)) * hermite(n_, hermite_argument(x));
}

double EigenState::derivative(double x) const {
  const double y = hermite_argument(x);
  return std::exp(log_norm_ + envelope_.exponent(x)) *
         (envelope_.slope(x) * hermite(n_, y) + hermite_derivative(n_, y) / cov_.p);
}

double EigenState::second_derivative(double x) const {
  const double y = hermite_argument(x);
  const double s = envelope_.slope(x);
  const double h0 = hermite(n_, y);
  const double h1 = hermite_derivative(n_, y) / cov_.p;
  const double h2 = hermite_second_derivative(n_, y) / (cov_.p * cov_.p);
  return std::exp(log_norm_ + envelope_.exponent(x)) *
         ((2.0 * envelope_.quad + s * s) * h0 + 2.0 * s * h1 + h2);
}

double EigenState::eigen_equation_residual(double x) const {
  // Common factor N e^{g(x)} cancels in the ratio.
  const double y = hermite_argument(x);
  const double s = envelope_.slope(x);
  const double h0 = hermite(n_, y);
  const double h1 = hermite_derivative(n_, y) / cov_.p;
  const double h2 = hermite_second_derivative(n_, y) / (cov_.p * cov_.p);
  const double r0 = h0;
  const double r1 = s * h0 + h1;
  const double r2 = (2.0 * envelope_.quad + s * s) * h0 + 2.0 * s * h1 + h2;
  const HamCoeffs& c = coeffs_;
  const double kinetic = c.A * r2;
  const double drift = (c.B * x + c.C) * r1;
  const double potential = ((c.D * x + c.E) * x + c.F) * r0;
  const double level = (n_ + 0.5) * r0;
  // Per-derivative-order magnitudes keep the scale non-zero at the simple zeros of H_n.
  const double p = cov_.p;
  const double natural = std::abs(c.A) * (std::abs(h2) + std::abs(h1) / p + std::abs(h0) / (p * p));
  const double scale = std::abs(kinetic) + std::abs(drift) + std::abs(potential) +
                       std::abs(level) + natural;
  if (scale == 0.0) return 0.0;
  return std::abs(kinetic + drift + potential - level) / scale;
}

double eval_eigenfunction(const EigenState& state, double x) { return state(x); }

Eigen::MatrixXd gram_matrix(const HamCoeffs& h, int n_max, const QuadratureRule& rule) {
  if (n_max < 0) throw std::invalid_argument("gram_matrix: n_max must be non-negative");
  const ChangeOfVariable cov = change_of_variable(h);
  const EnvelopeNodes nodes = envelope_nodes(h, rule);
  const auto width = static_cast<std::size_t>(n_max + 1);
  const std::vector<double> table = hermite_table(nodes, cov, n_max);

  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double* hv = table.data() + i * width;
    for (int m = 0; m <= n_max; ++m)
      for (int k = m; k <= n_max; ++k) raw(m, k) += nodes.w[i] * hv[m] * hv[k];
  }
  Eigen::MatrixXd g(n_max + 1, n_max + 1);
  for (int m = 0; m <= n_max; ++m)
    for (int k = m; k <= n_max; ++k) {
      g(m, k) = raw(m, k) / std::sqrt(raw(m, m) * raw(k, k));
      g(k, m) = g(m, k);
    }
  return g;
}

PositionSpread position_spread(const EigenState& state, const QuadratureRule& rule) {
  const EnvelopeNodes nodes = envelope_nodes(state.coeffs(), rule);
  double total = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  const double centre = state.envelope().center();
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double hn = hermite(state.n(), state.hermite_argument(nodes.x[i]));
    const double rho = nodes.w[i] * hn * hn;
    const double d = nodes.x[i] - centre;
    total += rho;
    m1 += rho * d;
    m2 += rho * d * d;
  }
  m1 /= total;
  m2 /= total;
  return {centre + m1, std::sqrt(std::max(0.0, m2 - m1 * m1))};
}

int sign_changes(const EigenState& state, double half_width_sigmas, int samples) {
  if (samples < 2) throw std::invalid_argument("sign_changes: need at least two samples");
  const PositionSpread s = position_spread(state);
  // The zeros of H_n lie within |y| < sqrt(2n+1), which need not sit inside the bulk of psi².
  const double zero_reach = state.cov().p * std::sqrt(2.0 * state.n() + 2.0);
  const double lo = std::min(s.mean - half_width_sigmas * s.sigma, state.cov().q - zero_reach);
  const double hi = std::max(s.mean + half_width_sigmas * s.sigma, state.cov().q + zero_reach);
  const double step = (hi - lo) / (samples - 1);
  int changes = 0;
  int last_sign = 0;
  for (int i = 0; i < samples; ++i) {
    const double v = state(lo + i * step);
    const int sg = (v > 0.0) - (v < 0.0);
    if (sg == 0) continue;
    if (last_sign != 0 && sg != last_sign) ++changes;
    last_sign = sg;
  }
  return changes;
}

double max_eigen_equation_residual(const EigenState& state, double half_width_sigmas,
                                   int samples) {
  const PositionSpread s = position_spread(state);
  const double lo = s.mean - half_width_sigmas * s.sigma;
  const double step = 2.0 * half_width_sigmas * s.sigma / (samples - 1);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i)
    worst = std::max(worst, state.eigen_equation_residual(lo + i * step));
  return worst;
}

double norm_case_i(int n) {
  return std::exp(0.5 * std::log(3.0) - 0.25 * std::log(std::numbers::pi) -
                  0.5 * n * std::numbers::ln2 - 0.5 * log_factorial(n));
}

double norm_case_ii(int n, double lambda) {
  return std::exp(0.25 * std::log(lambda) - 0.25 * std::log(std::numbers::pi) -
                  0.5 * n * std::numbers::ln2 - 0.5 * log_factorial(n));
}

double norm_case_iii(int n, double lambda) {
  return std::exp(-0.25 * std::log(std::numbers::pi) - log_factorial(n) +
                  0.25 * std::log((1.0 + lambda) / (1.0 - lambda)) +
                  0.5 * n * std::log(1.0 + lambda) - 0.5 * std::log(f_series(n, lambda)));
}

double norm_lambda_shift(int n, double lambda) {
  return std::exp(-0.5 * n * std::numbers::ln2 - 0.25 * std::log(std::numbers::pi) -
                  0.5 * log_factorial(n) - 0.5 * std::log(laguerre(n, 0, -lambda * lambda)));
}

namespace {

struct LadderRows {
  double d_coeff;  // coefficient of d/dx
  double x_coeff;  // coefficient of x
  double constant;
};

LadderRows lowering_rows(const CParams& c) {
  const double r = 1.0 / std::numbers::sqrt2;
  return {r * (1.0 + c.c1 - c.c2), r * (1.0 + c.c1 + c.c2), c.c3};
}

LadderRows raising_rows(const CParams& c) {
  const double r = 1.0 / std::numbers::sqrt2;
  return {r * (c.c4 - 1.0 - c.c5), r * (c.c4 + 1.0 + c.c5), c.c6};
}

double apply_rows(const LadderRows& rows, const EigenState& s, double x) {
  return rows.d_coeff * s.derivative(x) + (rows.x_coeff * x + rows.constant) * s(x);
}

// Fits ladder(psi_n) ≈ k psi_target in the envelope-weighted L2 sense.
LadderFit fit_ladder(const CParams& c, const LadderRows& rows, int n, int target,
                     const QuadratureRule& rule) {
  const HamCoeffs h = coeffs_from_c(c);
  const EigenState src(h, n, rule);
  const EnvelopeNodes nodes = envelope_nodes(h, rule);
  const GaussianEnvelope& env = src.envelope();
  double cross = 0.0;
  double target_sq = 0.0;
  double image_sq = 0.0;
  std::vector<double> image(nodes.x.size());
  std::vector<double> tgt(nodes.x.size());
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double x = nodes.x[i];
    const double y = src.hermite_argument(x);
    const double h0 = hermite(n, y);
    const double r1 = env.slope(x) * h0 + hermite_derivative(n, y) / src.cov().p;
    image[i] = rows.d_coeff * r1 + (rows.x_coeff * x + rows.constant) * h0;
    tgt[i] = target >= 0 ? hermite(target, y) : 0.0;
    cross += nodes.w[i] * image[i] * tgt[i];
    target_sq += nodes.w[i] * tgt[i] * tgt[i];
    image_sq += nodes.w[i] * image[i] * image[i];
  }
  LadderFit fit;
  const double k_reduced = target_sq > 0.0 ? cross / target_sq : 0.0;
  double resid = 0.0;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double d = image[i] - k_reduced * tgt[i];
    resid += nodes.w[i] * d * d;
  }
  if (target < 0) {
    // b psi_0 = 0: report the image norm relative to psi_0 itself.
    double base = 0.0;
    for (std::size_t i = 0; i < nodes.x.size(); ++i) base += nodes.w[i];
    fit.relative_residual = std::sqrt(image_sq / base);
    return fit;
  }
  fit.constant = k_reduced * std::exp(log_normalize(h, n, rule) - log_normalize(h, target, rule));
  fit.relative_residual = image_sq > 0.0 ? std::sqrt(resid / image_sq) : 0.0;
  return fit;
}

}  // namespace

double apply_lowering(const CParams& c, const EigenState& state, double x) {
  return apply_rows(lowering_rows(c), state, x);
}

double apply_raising(const CParams& c, const EigenState& state, double x) {
  return apply_rows(raising_rows(c), state, x);
}

double lowering_constant_closed(const CParams& c, int n, const QuadratureRule& rule) {
  if (n < 0) throw std::invalid_argument("lowering_constant_closed: n must be non-negative");
  if (n == 0) return 0.0;
  const HamCoeffs h = coeffs_from_c(c);
  require_admissible(h);
  const double ratio = std::exp(log_normalize(h, n, rule) - log_normalize(h, n - 1, rule));
  return n / std::sqrt(-h.A) * ratio * (1.0 + c.c1 - c.c2);
}

double raising_constant_closed(const CParams& c, int n, const QuadratureRule& rule) {
  if (n < 0) throw std::invalid_argument("raising_constant_closed: n must be non-negative");
  const HamCoeffs h = coeffs_from_c(c);
  require_admissible(h);
  const double ratio = std::exp(log_normalize(h, n, rule) - log_normalize(h, n + 1, rule));
  return 1.0 / (2.0 * std::sqrt(-h.A)) * ratio * (1.0 + c.c5 - c.c4);
}

LadderFit lowering_constant_measured(const CParams& c, int n, const QuadratureRule& rule) {
  if (n < 0) throw std::invalid_argument("lowering_constant_measured: n must be non-negative");
  return fit_ladder(c, lowering_rows(c), n, n - 1, rule);
}

LadderFit raising_constant_measured(const CParams& c, int n, const QuadratureRule& rule) {
  if (n < 0) throw std::invalid_argument("raising_constant_measured: n must be non-negative");
  return fit_ladder(c, raising_rows(c), n, n + 1, rule);
}

}  // namespace oscdeform
