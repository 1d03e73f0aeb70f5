#include "oscdeform/moments.hpp"

#include "oscdeform/eigensystem.hpp"
#include "oscdeform/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace oscdeform {

bool is_squeezed(double variance) { return variance < 0.5 - kSqueezeDeadband; }

MomentReport make_report(double mean_x, double var_x, double mean_p2) {
  MomentReport r;
  r.mean_x = mean_x;
  r.mean_x2 = var_x + mean_x * mean_x;
  r.mean_p = 0.0;
  r.mean_p2 = mean_p2;
  r.var_x = std::max(0.0, var_x);
  r.var_p = mean_p2;
  r.product = std::sqrt(r.var_x * r.var_p);
  r.squeezed_x = is_squeezed(r.var_x);
  r.squeezed_p = is_squeezed(r.var_p);
  r.coherent = std::abs(r.product - 0.5) <= kCoherenceTolerance;
  return r;
}

MomentReport moments_quadrature(const HamCoeffs& h, int n, const QuadratureRule& rule) {
  if (n < 0) throw std::invalid_argument("moments_quadrature: n must be non-negative");
  const ChangeOfVariable cov = change_of_variable(h);
  const GaussianEnvelope env = gaussian_envelope(h);
  const EnvelopeNodes nodes = envelope_nodes(h, rule);
  const double centre = env.center();

  // Moments about the envelope centre, then shifted back.
  double total = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double kinetic = 0.0;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double x = nodes.x[i];
    const double y = (x - cov.q) / cov.p;
    const double hn = hermite(n, y);
    const double dpsi = env.slope(x) * hn + hermite_derivative(n, y) / cov.p;
    const double w = nodes.w[i];
    const double d = x - centre;
    total += w * hn * hn;
    m1 += w * hn * hn * d;
    m2 += w * hn * hn * d * d;
    kinetic += w * dpsi * dpsi;
  }
  m1 /= total;
  m2 /= total;
  const double mean_x = centre + m1;
  const double var_x = std::max(0.0, m2 - m1 * m1);
  return make_report(mean_x, var_x, kinetic / total);
}

MomentReport ground_moments_closed(const HamCoeffs& h) {
  require_admissible(h);
  const double mean_x = h.C + 2.0 * h.E * h.A / (1.0 - h.B);
  const double var_x = h.A / (h.B - 1.0);
  const double var_p = (h.B - 1.0) / (4.0 * h.A);
  return make_report(mean_x, var_x, var_p);
}

SqueezeVerdict squeezing_verdict_ground(const HamCoeffs& h) {
  require_admissible(h);
  const double edge = 2.0 * h.A + 1.0;
  return {h.B < edge, h.B > edge};
}

double printed_variance_lambda_shift(int n, double lambda) {
  if (n < 0) throw std::invalid_argument("printed_variance_lambda_shift: n must be >= 0");
  const double l2 = lambda * lambda;
  const double base = laguerre(n, 0, -l2);
  const double lower = laguerre(n - 1, 1, -l2) / base;
  const double same = laguerre(n, 1, -l2) / base;
  return 2.0 * n + 0.5 - (2.0 * l2 + 1.0) * lower - 2.0 * l2 * same * same;
}

double variance_lambda_shift_oracle(int n, double lambda, const QuadratureRule& rule) {
  if (n < 0) throw std::invalid_argument("variance_lambda_shift_oracle: n must be >= 0");
  // psi² ∝ exp(-x²) H_n(x + λ/√2)²; the Gauss-Hermite weight is exactly exp(-x²).
  const double shift = lambda / std::numbers::sqrt2;
  double total = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const double hn = hermite(n, x + shift);
    const double rho = rule.weights[i] * hn * hn;
    total += rho;
    m1 += rho * x;
    m2 += rho * x * x;
  }
  m1 /= total;
  m2 /= total;
  return m2 - m1 * m1;
}

bool SqueezingWindow::contains(double lambda) const {
  return std::any_of(intervals.begin(), intervals.end(), [&](const SqueezeInterval& iv) {
    const double lo = iv.lo.value_or(grid.min);
    const double hi = iv.hi.value_or(grid.max);
    return lambda > lo && lambda < hi;
  });
}

double preset_variance_x(PresetKind kind, int n, double lambda, const QuadratureRule& rule) {
  const HamCoeffs h = coeffs_from_c(preset({kind, lambda}));
  return moments_quadrature(h, n, rule).var_x;
}

std::vector<double> grid_points(const LambdaGrid& grid) {
  std::vector<double> pts(static_cast<std::size_t>(std::max(grid.steps, 0)));
  const double span = grid.max - grid.min;
  const double last = static_cast<double>(grid.steps - 1);
  for (std::size_t i = 0; i < pts.size(); ++i)
    pts[i] = i + 1 == pts.size() ? grid.max : grid.min + span * static_cast<double>(i) / last;
  return pts;
}

SqueezingWindow squeezing_window_scan(PresetKind kind, int n, const LambdaGrid& grid,
                                      double resolution, const QuadratureRule& rule) {
  if (grid.steps < 2) throw std::invalid_argument("squeezing_window_scan: need >= 2 grid steps");
  if (!(grid.max > grid.min))
    throw std::invalid_argument("squeezing_window_scan: lambda max must exceed min");
  const LambdaDomain dom = lambda_domain(kind);
  if (!dom.contains(grid.min) || !dom.contains(grid.max)) {
    std::ostringstream msg;
    msg << "lambda grid [" << grid.min << ", " << grid.max << "] leaves the domain of "
        << preset_name(kind);
    throw ParameterRangeError(msg.str());
  }

  auto squeezed_at = [&](double lam) { return is_squeezed(preset_variance_x(kind, n, lam, rule)); };
  // Bisect between a point inside and one outside the window.
  auto refine = [&](double inside, double outside) {
    while (std::abs(outside - inside) > 0.25 * resolution) {
      const double mid = 0.5 * (inside + outside);
      if (squeezed_at(mid))
        inside = mid;
      else
        outside = mid;
    }
    return 0.5 * (inside + outside);
  };

  SqueezingWindow win;
  win.preset = kind;
  win.n = n;
  win.grid = grid;
  win.resolution = resolution;

  const std::vector<double> lams = grid_points(grid);
  std::vector<char> flags(lams.size());
  for (std::size_t i = 0; i < lams.size(); ++i) flags[i] = squeezed_at(lams[i]);

  std::optional<SqueezeInterval> open;
  for (std::size_t i = 0; i < lams.size(); ++i) {
    if (flags[i] && !open) {
      open = SqueezeInterval{};
      if (i > 0) open->lo = refine(lams[i], lams[i - 1]);
    } else if (!flags[i] && open) {
      open->hi = refine(lams[i - 1], lams[i]);
      win.intervals.push_back(*open);
      open.reset();
    }
  }
  if (open) win.intervals.push_back(*open);
  return win;
}

}  // namespace oscdeform
