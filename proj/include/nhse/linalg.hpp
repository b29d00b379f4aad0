#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nhse {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Base class for every error raised by the library. `where` names the
/// module operation that failed so CLI messages can point at it.
class Error : public std::runtime_error {
public:
  Error(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

private:
  std::string where_;
};

/// Bad input: malformed configuration, inconsistent geometry, unknown names.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Numerical failure: non-convergence, near-defective matrices, undersampling.
class NumericalError : public Error {
public:
  using Error::Error;
};

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

/// Matrix exponential by scaling and squaring with a degree-13 diagonal Padé
/// approximant (Higham 2005). 2x2 inputs take a closed form.
ComplexMatrix expm(const ComplexMatrix& a);

/// Padé path only, exposed so tests can compare it against the 2x2 closed form.
ComplexMatrix expm_pade(const ComplexMatrix& a);

double operator_norm(const ComplexMatrix& a);

/// Condition number in the 2-norm.
double condition_number(const ComplexMatrix& a);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Sorts complex numbers lexicographically by (real, imaginary).
void sort_lexicographic(std::vector<Complex>& values);

/// Largest pairing distance between two equally sized complex multisets.
/// Exact (all permutations) for up to 8 elements, greedy nearest-neighbour
/// matching beyond that. Lexicographic sorting alone is not enough here:
/// conjugate pairs share a real part, so rounding noise reorders them.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b);

}  // namespace nhse
