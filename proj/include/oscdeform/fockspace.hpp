#pragma once

#include "oscdeform/deformation.hpp"

#include <Eigen/Dense>

#include <vector>

namespace oscdeform {

/// Rows/columns excluded at the truncation edge when comparing operator identities.
/// Products of the truncated ladder matrices are exact on the leading dim - 2 block.
inline constexpr int kTruncationMargin = 2;
inline constexpr double kImaginaryTolerance = 1e-8;

/// Dense matrices of a, b, b† and H = ½{b, b†} on the first `dim` Fock states.
/// a, b, b† are plain truncations; h is the exact projection of ½{b, b†}, so it agrees with
/// ½(b·b† + b†·b) of the truncated matrices everywhere except the last diagonal entry.
struct TruncatedOperators {
  int dim = 0;
  CParams c;
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  Eigen::MatrixXd bdag;
  Eigen::MatrixXd h;
};

enum class ConstraintCheck { enforce, skip };

/// Throws std::invalid_argument for dim < 4 and ConstraintError for an invalid sextuple
/// unless `check` is ConstraintCheck::skip.
TruncatedOperators build_truncated(const CParams& c, int dim,
                                   ConstraintCheck check = ConstraintCheck::enforce);

/// max |([b, b†] - I)_{ij}| over the interior block.
double commutator_residual(const TruncatedOperators& t);

struct WignerResiduals {
  double lowering = 0.0;  // [H, b] + b
  double raising = 0.0;   // [H, b†] - b†
};
WignerResiduals wigner_residuals(const TruncatedOperators& t);

/// Eigenpairs of the truncated H ordered by real part. Vectors have unit 2-norm.
struct EigenPairs {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
};

/// Chooses a symmetric solver, exact triangular substitution, or the general real solver.
/// Throws SpectrumError if any of the lowest k eigenvalues is complex beyond
/// kImaginaryTolerance, or if the solver fails.
EigenPairs lowest_eigenpairs(const TruncatedOperators& t, int k);

struct NumberResiduals {
  double bbdag = 0.0;  // b b† v_n - (n+1) v_n
  double bdagb = 0.0;  // b† b v_n - n v_n
};

/// Residuals of the number identities on the lowest `levels` eigenvectors of H,
/// measured on the interior rows.
NumberResiduals number_identities(const TruncatedOperators& t, int levels = 20);

/// Largest relative deviation of b v_n from the span of v_{n-1} (and b† v_n from v_{n+1})
/// over the lowest `levels` eigenvectors.
double ladder_proportionality(const TruncatedOperators& t, int levels = 10);

/// The k lowest eigenvalues of the (generally non-symmetric) truncated H. Requires k <= dim/2.
std::vector<double> spectrum_check(const TruncatedOperators& t, int k);

/// max_n |E_n - (n + 1/2)| over the values returned by spectrum_check.
double spectrum_deviation(const std::vector<double>& levels);

bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-12);
/// Exactly upper or lower triangular.
bool is_triangular(const Eigen::MatrixXd& m);

}  // namespace oscdeform
