#pragma once

#include <stdexcept>
#include <string>

namespace oscdeform {

/// A c-sextuple that does not satisfy [b, b†] = 1.
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Hamiltonian coefficients whose eigenfunctions are not square integrable.
class AdmissibilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A deformation parameter outside the validity range of its preset.
class ParameterRangeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Eigen-solver failure or a complex eigenvalue where a real one is expected.
class SpectrumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oscdeform
