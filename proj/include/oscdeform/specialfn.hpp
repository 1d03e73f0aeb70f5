#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace oscdeform {

/// Physicists' Hermite polynomial H_n(x) (H_1(x) = 2x), by three-term recurrence.
/// Very large n or |x| overflow to a non-finite value rather than throwing.
double hermite(int n, double x);

/// d/dx H_n(x) = 2n H_{n-1}(x).
double hermite_derivative(int n, double x);

/// Fills out[k] = H_k(x) for k = 0..out.size()-1.
void hermite_sequence(double x, std::span<double> out);

/// Generalized Laguerre polynomial L_n^{(alpha)}(x).
/// n = -1 is accepted and yields 0, so that index-shifted ratios stay defined at n = 0.
double laguerre(int n, int alpha, double x);

/// The finite sum F_n(lambda) entering the normalization of the b = a + lambda a† family.
/// Even and odd n use different parity sums; F_n(0) = 2^n / n!.
double f_series(int n, double lambda);

/// log(n!) via lgamma; exact table lookup for n <= 20.
double log_factorial(int n);

/// Gauss-Hermite rule for weight exp(-x^2).
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // all positive

  [[nodiscard]] int order() const { return static_cast<int>(nodes.size()); }

  template <class F>
  [[nodiscard]] double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

inline constexpr int kDefaultQuadratureOrder = 128;

/// Nodes from the Golub-Welsch eigenproblem, polished by Newton iteration on the
/// orthonormal recurrence; weights from the Christoffel sum. Throws on order < 1.
QuadratureRule gauss_hermite(int order);

/// Shared immutable rule of order kDefaultQuadratureOrder.
const QuadratureRule& default_rule();

}  // namespace oscdeform
