#include "oscdeform/specialfn.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oscdeform {

double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite: n must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_derivative(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_derivative: n must be non-negative");
  return n == 0 ? 0.0 : 2.0 * n * hermite(n - 1, x);
}

void hermite_sequence(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() > 1) out[1] = 2.0 * x;
  for (std::size_t k = 2; k < out.size(); ++k)
    out[k] = 2.0 * x * out[k - 1] - 2.0 * static_cast<double>(k - 1) * out[k - 2];
}

double laguerre(int n, int alpha, double x) {
  if (n < -1) throw std::invalid_argument("laguerre: n must be >= -1");
  if (alpha < 0) throw std::invalid_argument("laguerre: alpha must be non-negative");
  if (n == -1) return 0.0;
  if (n == 0) return 1.0;
  // (k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial: n must be non-negative");
  static const auto table = [] {
    std::array<double, 21> t{};
    double f = 1.0;
    t[0] = 0.0;
    for (int k = 1; k <= 20; ++k) {
      f *= k;
      t[static_cast<std::size_t>(k)] = std::log(f);
    }
    return t;
  }();
  if (n <= 20) return table[static_cast<std::size_t>(n)];
  return std::lgamma(n + 1.0);
}

double f_series(int n, double lambda) {
  if (n < 0) throw std::invalid_argument("f_series: n must be non-negative");
  const double ln2 = std::numbers::ln2;
  double sum = 0.0;
  if (n % 2 == 0) {
    const int half = n / 2;
    for (int l = 0; l <= half; ++l) {
      const double log_mag = 2.0 * l * ln2 - log_factorial(2 * l) - 2.0 * log_factorial(half - l);
      sum += std::exp(log_mag) * std::pow(lambda, n - 2 * l);
    }
  } else {
    const int half = (n - 1) / 2;
    for (int l = 0; l <= half; ++l) {
      const double log_mag =
          (2.0 * l + 1.0) * ln2 - log_factorial(2 * l + 1) - 2.0 * log_factorial(half - l);
      sum += std::exp(log_mag) * std::pow(lambda, n - 1 - 2 * l);
    }
  }
  return sum;
}

namespace {

// Orthonormal Hermite functions without the Gaussian factor:
// phi_0 = pi^{-1/4}, phi_j = x sqrt(2/j) phi_{j-1} - sqrt((j-1)/j) phi_{j-2}.
struct OrthonormalEval {
  double value;       // phi_n(x)
  double previous;    // phi_{n-1}(x)
  double christoffel; // sum_{k<n} phi_k(x)^2
};

OrthonormalEval orthonormal_hermite(int n, double x) {
  const double phi0 = std::pow(std::numbers::pi, -0.25);
  double prev = 0.0;
  double cur = phi0;
  double sum = 0.0;
  for (int j = 1; j <= n; ++j) {
    sum += cur * cur;
    const double next = x * std::sqrt(2.0 / j) * cur - std::sqrt((j - 1.0) / j) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev, sum};
}

}  // namespace

QuadratureRule gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  QuadratureRule rule;
  if (order == 1) {
    rule.nodes = {0.0};
    rule.weights = {std::sqrt(std::numbers::pi)};
    return rule;
  }

  const auto n = static_cast<Eigen::Index>(order);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (Eigen::Index k = 1; k < n; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k) / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite: tridiagonal eigensolver failed");

  std::vector<double> x(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(x.begin(), x.end());

  // phi_n' = sqrt(2n) phi_{n-1}
  for (double& xi : x) {
    for (int it = 0; it < 8; ++it) {
      const auto ev = orthonormal_hermite(order, xi);
      const double step = ev.value / (std::sqrt(2.0 * order) * ev.previous);
      xi -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(xi))) break;
    }
  }
  for (std::size_t i = 0; i < x.size() / 2; ++i) {
    const double m = 0.5 * (x[x.size() - 1 - i] - x[i]);
    x[i] = -m;
    x[x.size() - 1 - i] = m;
  }
  if (x.size() % 2 == 1) x[x.size() / 2] = 0.0;

  rule.nodes = x;
  rule.weights.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto ev = orthonormal_hermite(order, x[i]);
    rule.weights[i] = 1.0 / ev.christoffel;
  }
  for (std::size_t i = 0; i < x.size() / 2; ++i) {
    const double w = 0.5 * (rule.weights[i] + rule.weights[x.size() - 1 - i]);
    rule.weights[i] = w;
    rule.weights[x.size() - 1 - i] = w;
  }
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = gauss_hermite(kDefaultQuadratureOrder);
  return rule;
}

}  // namespace oscdeform
