#pragma once

// Exact diagonalization, Gibbs states and the zero-temperature limit.
//
// Boltzmann weights are always formed relative to the lowest eigenvalue,
// exp(-(E_k - E_min)/T), so no exponential overflows at small T. T = 0 is
// never exponentiated: it is served by the equal mixture over the ground
// manifold, which is the T -> 0 limit of the Gibbs state.

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "xxring/types.hpp"

namespace xxring {

inline constexpr double kDefaultDegeneracyTol = 1e-9;

/// Temperature in energy units (Boltzmann constant set to one).
class Temperature {
 public:
  explicit Temperature(double value) : value_(value) {
    if (!(value >= 0.0) || !std::isfinite(value))
      throw std::invalid_argument("temperature must be finite and non-negative");
  }

  static Temperature zero() { return Temperature(0.0); }

  double value() const { return value_; }
  bool is_zero() const { return value_ == 0.0; }
  double beta() const { return 1.0 / value_; }

 private:
  double value_;
};

/// Eigenvalues ascending; column k of `eigenvectors` belongs to eigenvalue k.
template <typename Real = double>
struct SpectralDecomposition {
  RealVector<Real> eigenvalues;
  Operator<Real> eigenvectors;

  Eigen::Index dimension() const { return eigenvalues.size(); }
  Real ground_energy() const { return eigenvalues(0); }
};

/// Dense self-adjoint solve (Householder tridiagonalization + implicit QL,
/// Eigen::SelfAdjointEigenSolver). Deterministic for a given input.
template <typename Real = double>
SpectralDecomposition<Real> eigendecompose(const HermitianOperator<Real>& h) {
  if (h.rows() != h.cols() || h.rows() == 0)
    throw std::invalid_argument("eigendecompose: operator must be square and non-empty");
  const Real scale = std::max(Real(1), h.cwiseAbs().maxCoeff());
  if (!is_hermitian(h, Real(1e-12) * scale))
    throw std::invalid_argument("eigendecompose: operator is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Operator<Real>> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecompose: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace detail {

inline void require_positive(const Temperature& t, const char* what) {
  if (t.is_zero())
    throw DomainError(std::string(what) +
                      ": T = 0 has no Boltzmann weights; use ground_state_projector");
}

}  // namespace detail

/// Boltzmann weights exp(-(E_k - E_min)/T), unnormalized; the ground level has weight 1.
template <typename Real = double>
RealVector<Real> shifted_boltzmann_factors(const SpectralDecomposition<Real>& spec,
                                           const Temperature& t) {
  detail::require_positive(t, "boltzmann weights");
  const Real beta = Real(1) / Real(t.value());
  const Real e_min = spec.ground_energy();
  return (-(spec.eigenvalues.array() - e_min) * beta).exp().matrix();
}

/// Normalized occupation probabilities.
template <typename Real = double>
RealVector<Real> boltzmann_weights(const SpectralDecomposition<Real>& spec, const Temperature& t) {
  RealVector<Real> w = shifted_boltzmann_factors(spec, t);
  return w / w.sum();
}

/// log Z = -E_min/T + log sum_k exp(-(E_k - E_min)/T); finite for every T > 0.
template <typename Real = double>
Real log_partition_function(const SpectralDecomposition<Real>& spec, const Temperature& t) {
  const RealVector<Real> w = shifted_boltzmann_factors(spec, t);
  return -spec.ground_energy() / Real(t.value()) + std::log(w.sum());
}

/// Z = Tr exp(-H/T). Throws std::overflow_error when Z is not representable;
/// log_partition_function stays valid in that case.
template <typename Real = double>
Real partition_function(const SpectralDecomposition<Real>& spec, const Temperature& t) {
  const Real log_z = log_partition_function(spec, t);
  if (log_z >= std::log(std::numeric_limits<Real>::max()))
    throw std::overflow_error("partition function overflows; use log_partition_function");
  return std::exp(log_z);
}

/// rho(T) = V diag(w) V^dagger with normalized Boltzmann weights w.
template <typename Real = double>
DensityMatrix<Real> gibbs_state(const SpectralDecomposition<Real>& spec, const Temperature& t) {
  const RealVector<Real> w = boltzmann_weights(spec, t);
  const Operator<Real> weighted = spec.eigenvectors * w.template cast<std::complex<Real>>().asDiagonal();
  return weighted * spec.eigenvectors.adjoint();
}

/// Number of levels within `degeneracy_tol` of the lowest one.
template <typename Real = double>
Eigen::Index ground_degeneracy(const SpectralDecomposition<Real>& spec,
                               double degeneracy_tol = kDefaultDegeneracyTol) {
  if (!(degeneracy_tol > 0.0)) throw std::invalid_argument("degeneracy_tol must be positive");
  Eigen::Index g = 0;
  while (g < spec.dimension() &&
         spec.eigenvalues(g) - spec.ground_energy() <= Real(degeneracy_tol))
    ++g;
  return g;
}

/// Equal-weight mixture over the ground manifold: the T -> 0 limit of gibbs_state.
template <typename Real = double>
DensityMatrix<Real> ground_state_projector(const SpectralDecomposition<Real>& spec,
                                           double degeneracy_tol = kDefaultDegeneracyTol) {
  const Eigen::Index g = ground_degeneracy(spec, degeneracy_tol);
  const auto ground = spec.eigenvectors.leftCols(g);
  return (ground * ground.adjoint()) / Real(g);
}

/// Gibbs state for T > 0, ground-manifold mixture for T = 0.
template <typename Real = double>
DensityMatrix<Real> thermal_state(const SpectralDecomposition<Real>& spec, const Temperature& t,
                                  double degeneracy_tol = kDefaultDegeneracyTol) {
  return t.is_zero() ? ground_state_projector(spec, degeneracy_tol) : gibbs_state(spec, t);
}

/// Tr[rho(T) H]; the ground-manifold energy at T = 0.
template <typename Real = double>
Real thermal_energy(const SpectralDecomposition<Real>& spec, const Temperature& t) {
  if (t.is_zero()) return spec.ground_energy();
  return boltzmann_weights(spec, t).dot(spec.eigenvalues);
}

/// Hermitian, unit trace and positive semidefinite, each up to `tol`.
template <typename Real>
bool is_density_matrix(const DensityMatrix<Real>& rho, Real tol = Real(1e-10)) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) return false;
  if (!is_hermitian(rho, tol)) return false;
  if (std::abs(rho.trace() - std::complex<Real>(1)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Operator<Real>> solver(rho, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

}  // namespace xxring
