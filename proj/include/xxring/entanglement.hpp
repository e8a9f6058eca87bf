#pragma once

// Partial traces and pairwise / single-site entanglement measures.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "xxring/types.hpp"

namespace xxring {

/// Strictly increasing, non-empty list of 1-based sites to keep.
class SiteSubset {
 public:
  SiteSubset(std::initializer_list<int> sites) : SiteSubset(std::vector<int>(sites)) {}

  explicit SiteSubset(std::vector<int> sites) : sites_(std::move(sites)) {
    if (sites_.empty()) throw std::invalid_argument("site subset must not be empty");
    if (sites_.front() < 1) throw std::invalid_argument("sites are 1-based");
    for (std::size_t k = 1; k < sites_.size(); ++k)
      if (sites_[k] <= sites_[k - 1])
        throw std::invalid_argument("site subset must be strictly increasing");
  }

  const std::vector<int>& sites() const { return sites_; }
  std::size_t size() const { return sites_.size(); }
  bool contains(int site) const { return std::binary_search(sites_.begin(), sites_.end(), site); }

  void check_within(int n_sites) const {
    if (sites_.back() > n_sites)
      throw std::invalid_argument("site " + std::to_string(sites_.back()) + " exceeds chain length " +
                                  std::to_string(n_sites));
  }

 private:
  std::vector<int> sites_;
};

namespace detail {

/// Bit masks of every assignment to `sites`, enumerated big-endian over the
/// listed order, placed at their positions in an n-site basis index.
inline std::vector<Eigen::Index> embedded_indices(const std::vector<int>& sites, int n_sites) {
  const std::size_t k = sites.size();
  std::vector<Eigen::Index> out(std::size_t{1} << k, 0);
  for (std::size_t a = 0; a < out.size(); ++a) {
    Eigen::Index full = 0;
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t bit = (a >> (k - 1 - s)) & 1u;
      if (bit) full |= Eigen::Index{1} << (n_sites - sites[s]);
    }
    out[a] = full;
  }
  return out;
}

}  // namespace detail

/// Reduced state on `keep`; kept sites stay in their original (big-endian) order.
template <typename Real>
DensityMatrix<Real> partial_trace(const DensityMatrix<Real>& rho, const SiteSubset& keep, int n_sites) {
  if (n_sites < 1 || n_sites > 30 || rho.rows() != (Eigen::Index{1} << n_sites) ||
      rho.cols() != rho.rows())
    throw std::invalid_argument("partial_trace: density matrix dimension does not match 2^n_sites");
  keep.check_within(n_sites);

  std::vector<int> traced;
  for (int site = 1; site <= n_sites; ++site)
    if (!keep.contains(site)) traced.push_back(site);

  const auto kept_idx = detail::embedded_indices(keep.sites(), n_sites);
  const auto traced_idx = detail::embedded_indices(traced, n_sites);
  const auto dim = static_cast<Eigen::Index>(kept_idx.size());

  DensityMatrix<Real> out = DensityMatrix<Real>::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a)
    for (Eigen::Index b = 0; b < dim; ++b) {
      std::complex<Real> sum(0);
      for (Eigen::Index t : traced_idx) sum += rho(kept_idx[a] | t, kept_idx[b] | t);
      out(a, b) = sum;
    }
  return out;
}

/// sigma^y (x) sigma^y in the two-qubit computational basis.
template <typename Real>
Operator<Real> spin_flip_yy() {
  Operator<Real> yy = Operator<Real>::Zero(4, 4);
  yy(0, 3) = yy(3, 0) = std::complex<Real>(-1);
  yy(1, 2) = yy(2, 1) = std::complex<Real>(1);
  return yy;
}

/// Decreasing square roots of the spectrum of rho (Y rho* Y), Y = sigma^y (x) sigma^y.
///
/// The spectrum of rho (Y rho* Y) equals that of A A^dagger with
/// A = sqrt(rho) Y sqrt(rho)*, so the lambdas are the singular values of A.
/// Negative eigenvalues of rho (round-off) are clipped to zero before sqrt.
template <typename Real>
Eigen::Matrix<Real, 4, 1> wootters_lambdas(const DensityMatrix<Real>& rho2) {
  if (rho2.rows() != 4 || rho2.cols() != 4)
    throw std::invalid_argument("wootters_concurrence: two-qubit (4x4) state required");
  const DensityMatrix<Real> herm = (rho2 + rho2.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<Operator<Real>> solver(herm);
  const RealVector<Real> roots = solver.eigenvalues().cwiseMax(Real(0)).cwiseSqrt();
  const Operator<Real> sqrt_rho = solver.eigenvectors() *
                                  roots.template cast<std::complex<Real>>().asDiagonal() *
                                  solver.eigenvectors().adjoint();
  const Operator<Real> a = sqrt_rho * spin_flip_yy<Real>() * sqrt_rho.conjugate();
  Eigen::JacobiSVD<Operator<Real>> svd(a);
  return svd.singularValues();  // already in decreasing order
}

/// C = max(l1 - l2 - l3 - l4, 0).
template <typename Real>
Real wootters_concurrence(const DensityMatrix<Real>& rho2) {
  const auto l = wootters_lambdas(rho2);
  return std::max(Real(0), l(0) - l(1) - l(2) - l(3));
}

/// Concurrence of sites i < j after tracing out the rest of an n-site state.
template <typename Real>
Real pair_concurrence(const DensityMatrix<Real>& rho, int site_i, int site_j, int n_sites) {
  if (site_i == site_j) throw std::invalid_argument("pair_concurrence: sites must differ");
  if (site_i > site_j) std::swap(site_i, site_j);
  return wootters_concurrence(partial_trace(rho, SiteSubset{site_i, site_j}, n_sites));
}

/// IC_i = sqrt(2 (1 - Tr rho_i^2)); meaningful as an entanglement measure for pure states.
template <typename Real>
Real i_concurrence(const DensityMatrix<Real>& rho, int site, int n_sites) {
  const DensityMatrix<Real> single = partial_trace(rho, SiteSubset{site}, n_sites);
  const Real purity = (single * single).trace().real();
  return std::sqrt(std::max(Real(0), Real(2) * (Real(1) - purity)));
}

/// Q = (1/N) sum_i IC_i^2.
template <typename Real>
Real global_entanglement(const DensityMatrix<Real>& rho, int n_sites) {
  Real sum(0);
  for (int site = 1; site <= n_sites; ++site) {
    const Real ic = i_concurrence(rho, site, n_sites);
    sum += ic * ic;
  }
  return sum / Real(n_sites);
}

template <typename Real = double>
struct EntanglementReport {
  std::map<std::pair<int, int>, Real> pair_concurrences;  // keys (i, j), i < j
  std::vector<Real> i_concurrences;                       // index 0 is site 1
  Real global_q = 0;
  Real residual = 0;  // 1 - sum_{i<j} C_ij^2

  Real pair(int i, int j) const {
    if (i > j) std::swap(i, j);
    return pair_concurrences.at({i, j});
  }
};

/// Every pair concurrence, every IC_i, Q and the residual 1 - sum C_ij^2.
template <typename Real>
EntanglementReport<Real> full_report(const DensityMatrix<Real>& rho, int n_sites) {
  EntanglementReport<Real> report;
  Real sum_sq(0);
  for (int i = 1; i <= n_sites; ++i)
    for (int j = i + 1; j <= n_sites; ++j) {
      const Real c = pair_concurrence(rho, i, j, n_sites);
      report.pair_concurrences.emplace(std::make_pair(i, j), c);
      sum_sq += c * c;
    }
  Real q(0);
  for (int site = 1; site <= n_sites; ++site) {
    const Real ic = i_concurrence(rho, site, n_sites);
    report.i_concurrences.push_back(ic);
    q += ic * ic;
  }
  report.global_q = q / Real(n_sites);
  report.residual = Real(1) - sum_sq;
  return report;
}

}  // namespace xxring
