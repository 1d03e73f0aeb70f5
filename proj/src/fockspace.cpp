#include "oscdeform/fockspace.hpp"

#include "oscdeform/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace oscdeform {

TruncatedOperators build_truncated(const CParams& c, int dim, ConstraintCheck check) {
  if (dim < 4) throw std::invalid_argument("build_truncated: dim must be >= 4");
  if (check == ConstraintCheck::enforce && !satisfies_constraint(c)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "c-parameters violate c1 + c5 + c1*c5 - c2*c4 = 0 (residual "
        << constraint_residual(c) << ")";
    throw ConstraintError(msg.str());
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd adag = a.transpose();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd b = (1.0 + c.c1) * a + c.c2 * adag + c.c3 * id;
  const Eigen::MatrixXd bdag = c.c4 * a + (1.0 + c.c5) * adag + c.c6 * id;

  // Normal-ordered ½{b, b†}, entry by entry, so the projection is exact and the
  // diagonal aa† + a†a = 2n + 1 carries no rounding from sqrt(n)².
  const double al = 1.0 + c.c1, be = c.c2, ga = c.c3, de = c.c4, ep = 1.0 + c.c5, ze = c.c6;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    h(n, n) = 0.5 * (al * ep + be * de) * (2.0 * n + 1.0) + ga * ze;
    if (n >= 1) {
      const double s1 = std::sqrt(static_cast<double>(n));
      h(n - 1, n) += (al * ze + ga * de) * s1;  // a
      h(n, n - 1) += (be * ze + ga * ep) * s1;  // a†
    }
    if (n >= 2) {
      const double s2 = std::sqrt(static_cast<double>(n) * (n - 1));
      h(n - 2, n) += al * de * s2;  // a²
      h(n, n - 2) += be * ep * s2;  // a†²
    }
  }

  TruncatedOperators t;
  t.dim = dim;
  t.c = c;
  t.a = a;
  t.b = b;
  t.bdag = bdag;
  t.h = h;
  return t;
}

namespace {

int interior(const TruncatedOperators& t) { return t.dim - kTruncationMargin; }

double interior_max_abs(const Eigen::MatrixXd& m, int n) {
  return m.topLeftCorner(n, n).cwiseAbs().maxCoeff();
}

enum class Shape { symmetric, upper, lower, general };

// Triangular wins over symmetric so diagonal matrices keep their exact diagonal.
Shape classify(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  bool upper = true;
  bool lower = true;
  for (Eigen::Index i = 0; i < n && (upper || lower); ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (m(i, j) == 0.0) continue;
      if (i > j) upper = false;
      if (i < j) lower = false;
    }
  if (upper) return Shape::upper;
  if (lower) return Shape::lower;
  if (is_symmetric(m)) return Shape::symmetric;
  return Shape::general;
}

// Eigenvector of a triangular matrix for the eigenvalue on diagonal entry k.
Eigen::VectorXd triangular_eigenvector(const Eigen::MatrixXd& m, Eigen::Index k, bool upper) {
  const Eigen::Index n = m.rows();
  const double ev = m(k, k);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v(k) = 1.0;
  auto solve = [&](Eigen::Index i, double acc) {
    const double gap = ev - m(i, i);
    if (gap == 0.0) {
      if (acc != 0.0) throw SpectrumError("truncated H is not diagonalizable (defective level)");
      return 0.0;
    }
    return acc / gap;
  };
  if (upper) {
    for (Eigen::Index i = k - 1; i >= 0; --i) {
      double acc = 0.0;
      for (Eigen::Index j = i + 1; j <= k; ++j) acc += m(i, j) * v(j);
      v(i) = solve(i, acc);
    }
  } else {
    for (Eigen::Index i = k + 1; i < n; ++i) {
      double acc = 0.0;
      for (Eigen::Index j = k; j < i; ++j) acc += m(i, j) * v(j);
      v(i) = solve(i, acc);
    }
  }
  return v.normalized();
}

std::vector<Eigen::Index> lowest_indices(const std::vector<double>& re, int k) {
  std::vector<Eigen::Index> idx(re.size());
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return re[a] < re[b]; });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

}  // namespace

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_triangular(const Eigen::MatrixXd& m) {
  const Shape s = classify(m);
  return s == Shape::upper || s == Shape::lower;
}

double commutator_residual(const TruncatedOperators& t) {
  const Eigen::MatrixXd comm = t.b * t.bdag - t.bdag * t.b;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(t.dim, t.dim);
  return interior_max_abs(comm - id, interior(t));
}

WignerResiduals wigner_residuals(const TruncatedOperators& t) {
  const Eigen::MatrixXd lower = t.h * t.b - t.b * t.h + t.b;
  const Eigen::MatrixXd raise = t.h * t.bdag - t.bdag * t.h - t.bdag;
  return {interior_max_abs(lower, interior(t)), interior_max_abs(raise, interior(t))};
}

EigenPairs lowest_eigenpairs(const TruncatedOperators& t, int k) {
  if (k < 1 || k > t.dim) throw std::invalid_argument("lowest_eigenpairs: 1 <= k <= dim");
  EigenPairs out;
  out.vectors.resize(t.dim, k);
  switch (classify(t.h)) {
    case Shape::symmetric: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (t.h + t.h.transpose()));
      if (es.info() != Eigen::Success) throw SpectrumError("symmetric eigensolver failed");
      for (int i = 0; i < k; ++i) {
        out.values.push_back(es.eigenvalues()(i));
        out.vectors.col(i) = es.eigenvectors().col(i);
      }
      break;
    }
    case Shape::upper:
    case Shape::lower: {
      const bool upper = classify(t.h) == Shape::upper;
      std::vector<double> diag(static_cast<std::size_t>(t.dim));
      for (int i = 0; i < t.dim; ++i) diag[static_cast<std::size_t>(i)] = t.h(i, i);
      const auto idx = lowest_indices(diag, k);
      for (int i = 0; i < k; ++i) {
        out.values.push_back(diag[static_cast<std::size_t>(idx[i])]);
        out.vectors.col(i) = triangular_eigenvector(t.h, idx[i], upper);
      }
      break;
    }
    case Shape::general: {
      Eigen::EigenSolver<Eigen::MatrixXd> es(t.h, true);
      if (es.info() != Eigen::Success) throw SpectrumError("general eigensolver failed");
      const auto& ev = es.eigenvalues();
      std::vector<double> re(static_cast<std::size_t>(t.dim));
      for (int i = 0; i < t.dim; ++i) re[static_cast<std::size_t>(i)] = ev(i).real();
      const auto idx = lowest_indices(re, k);
      for (int i = 0; i < k; ++i) {
        const auto z = ev(idx[i]);
        if (std::abs(z.imag()) > kImaginaryTolerance) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "complex eigenvalue " << z.real() << (z.imag() < 0 ? " - " : " + ")
              << std::abs(z.imag()) << "i among the lowest levels";
          throw SpectrumError(msg.str());
        }
        out.values.push_back(z.real());
        out.vectors.col(i) = es.eigenvectors().col(idx[i]).real().normalized();
      }
      break;
    }
  }
  return out;
}

NumberResiduals number_identities(const TruncatedOperators& t, int levels) {
  const EigenPairs pairs = lowest_eigenpairs(t, levels);
  const Eigen::MatrixXd bbd = t.b * t.bdag;
  const Eigen::MatrixXd bdb = t.bdag * t.b;
  const int rows = interior(t);
  NumberResiduals r;
  for (int n = 0; n < levels; ++n) {
    const Eigen::VectorXd v = pairs.vectors.col(n);
    const Eigen::VectorXd r1 = bbd * v - (n + 1.0) * v;
    const Eigen::VectorXd r2 = bdb * v - static_cast<double>(n) * v;
    r.bbdag = std::max(r.bbdag, r1.head(rows).cwiseAbs().maxCoeff());
    r.bdagb = std::max(r.bdagb, r2.head(rows).cwiseAbs().maxCoeff());
  }
  return r;
}

double ladder_proportionality(const TruncatedOperators& t, int levels) {
  const EigenPairs pairs = lowest_eigenpairs(t, levels);
  const int rows = interior(t);
  auto off_span = [&](const Eigen::VectorXd& w, const Eigen::VectorXd& target) {
    const Eigen::VectorXd wi = w.head(rows);
    const Eigen::VectorXd ti = target.head(rows);
    const double k = ti.dot(wi) / ti.squaredNorm();
    const double denom = wi.norm();
    return denom > 0.0 ? (wi - k * ti).norm() / denom : 0.0;
  };
  double worst = 0.0;
  for (int n = 0; n < levels; ++n) {
    const Eigen::VectorXd v = pairs.vectors.col(n);
    if (n > 0) worst = std::max(worst, off_span(t.b * v, pairs.vectors.col(n - 1)));
    if (n + 1 < levels) worst = std::max(worst, off_span(t.bdag * v, pairs.vectors.col(n + 1)));
  }
  return worst;
}

std::vector<double> spectrum_check(const TruncatedOperators& t, int k) {
  if (k < 1 || 2 * k > t.dim) throw std::invalid_argument("spectrum_check: need 1 <= k <= dim/2");
  return lowest_eigenpairs(t, k).values;
}

double spectrum_deviation(const std::vector<double>& levels) {
  double worst = 0.0;
  for (std::size_t n = 0; n < levels.size(); ++n)
    worst = std::max(worst, std::abs(levels[n] - (static_cast<double>(n) + 0.5)));
  return worst;
}

}  // namespace oscdeform
