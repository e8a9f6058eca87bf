#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace xxring {

/// Dense complex operator on a 2^N dimensional spin space.
template <typename Real>
using Operator = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using StateVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Hermitian operators and density matrices share the dense representation;
/// their invariants are checked by is_hermitian / check_density_matrix.
template <typename Real>
using HermitianOperator = Operator<Real>;

template <typename Real>
using DensityMatrix = Operator<Real>;

using Matrix = Operator<double>;
using Vector = StateVector<double>;

/// Raised when a zero-temperature request reaches a Boltzmann-weight path,
/// or a closed form is evaluated outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The closed-form T -> 0 limit is undefined at exact ground-state crossings.
class DegeneratePointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Largest entrywise |A - A^dagger|.
template <typename Derived>
auto hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a,
                  typename Derived::RealScalar tol = 1e-12) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

/// Spin count n with dim == 2^n, or -1 when dim is not a power of two.
inline int sites_for_dimension(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return (Eigen::Index{1} << n) == dim ? n : -1;
}

}  // namespace xxring
