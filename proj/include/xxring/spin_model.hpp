#pragma once

// Computational basis, Pauli operators and the XX / XXZ ring Hamiltonians.
//
// Conventions used throughout the library:
//   * |1> is spin up, |0> is spin down, sigma^z |1> = +|1>;
//   * site 1 is the most significant bit of a basis index, so for four
//     sites |0001> has index 1 and |1000> has index 8;
//   * sigma^+ |0> = |1>, sigma^- = (sigma^+)^dagger.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>
#include <unsupported/Eigen/KroneckerProduct>

#include "xxring/types.hpp"

namespace xxring {

inline constexpr int kMinSites = 2;
inline constexpr int kMaxSites = 12;

enum class Boundary { periodic };

struct ModelParams {
  double coupling_j = 1.0;
  double field_b = 0.0;
  double anisotropy_delta = 0.0;
  int n_sites = 4;
  Boundary boundary = Boundary::periodic;

  void validate() const {
    if (n_sites < kMinSites || n_sites > kMaxSites)
      throw std::invalid_argument("n_sites must lie in [2, 12], got " + std::to_string(n_sites));
  }

  Eigen::Index dimension() const { return Eigen::Index{1} << n_sites; }
};

/// One computational basis state of an N-site ring.
class BasisState {
 public:
  BasisState(std::uint32_t index, int n_sites) : index_(index), n_sites_(n_sites) {
    if (n_sites < 1 || n_sites > kMaxSites || index >= (1u << n_sites))
      throw std::invalid_argument("basis index out of range");
  }

  /// Parses a ket label such as "0101" (site 1 first).
  static BasisState from_bits(std::string_view bits) {
    if (bits.empty() || bits.size() > static_cast<std::size_t>(kMaxSites))
      throw std::invalid_argument("bad ket label");
    std::uint32_t index = 0;
    for (char c : bits) {
      if (c != '0' && c != '1') throw std::invalid_argument("bad ket label");
      index = (index << 1) | static_cast<std::uint32_t>(c - '0');
    }
    return BasisState(index, static_cast<int>(bits.size()));
  }

  std::uint32_t index() const { return index_; }
  int n_sites() const { return n_sites_; }

  /// Occupation of a 1-based site.
  int bit(int site) const { return static_cast<int>((index_ >> (n_sites_ - site)) & 1u); }

  int up_count() const { return __builtin_popcount(index_); }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(n_sites_), '0');
    for (int site = 1; site <= n_sites_; ++site)
      if (bit(site)) s[static_cast<std::size_t>(site - 1)] = '1';
    return s;
  }

 private:
  std::uint32_t index_;
  int n_sites_;
};

enum class Pauli { plus, minus, z, y };

/// 2x2 matrix in the (|0>, |1>) basis.
template <typename Real = double>
Operator<Real> pauli_matrix(Pauli kind) {
  using C = std::complex<Real>;
  Operator<Real> m = Operator<Real>::Zero(2, 2);
  switch (kind) {
    case Pauli::plus:
      m(1, 0) = C(1);
      break;
    case Pauli::minus:
      m(0, 1) = C(1);
      break;
    case Pauli::z:
      m(0, 0) = C(-1);
      m(1, 1) = C(1);
      break;
    case Pauli::y:
      // -i sigma^+ + i sigma^-
      m(1, 0) = C(0, -1);
      m(0, 1) = C(0, 1);
      break;
  }
  return m;
}

namespace detail {

template <typename Real>
using SparseOperator = Eigen::SparseMatrix<std::complex<Real>>;

template <typename Real>
SparseOperator<Real> sparse_identity(Eigen::Index dim) {
  SparseOperator<Real> id(dim, dim);
  id.setIdentity();
  return id;
}

inline void check_site(int site, int n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw std::invalid_argument("n_sites out of range: " + std::to_string(n_sites));
  if (site < 1 || site > n_sites)
    throw std::invalid_argument("site " + std::to_string(site) + " outside [1, " +
                                std::to_string(n_sites) + "]");
}

/// Kronecker lift of a 2x2 operator: identity on sites before and after `site`.
template <typename Real>
SparseOperator<Real> lift_site(const Operator<Real>& local, int site, int n_sites) {
  check_site(site, n_sites);
  const SparseOperator<Real> left = sparse_identity<Real>(Eigen::Index{1} << (site - 1));
  const SparseOperator<Real> right = sparse_identity<Real>(Eigen::Index{1} << (n_sites - site));
  const SparseOperator<Real> mid = local.sparseView();
  SparseOperator<Real> left_mid = Eigen::kroneckerProduct(left, mid);
  SparseOperator<Real> out = Eigen::kroneckerProduct(left_mid, right);
  return out;
}

template <typename Real>
SparseOperator<Real> lift_pauli(Pauli kind, int site, int n_sites) {
  return lift_site<Real>(pauli_matrix<Real>(kind), site, n_sites);
}

inline int next_site(int site, int n_sites) { return site == n_sites ? 1 : site + 1; }

/// Bonds (n, n+1) for n = 1..N with N+1 wrapped to 1. For N = 2 the pair
/// (1,2) appears twice, exactly as the ring sum is written.
inline std::vector<std::pair<int, int>> ring_bonds(int n_sites) {
  std::vector<std::pair<int, int>> bonds;
  for (int n = 1; n <= n_sites; ++n) bonds.emplace_back(n, next_site(n, n_sites));
  return bonds;
}

template <typename Real>
SparseOperator<Real> xx_hopping(int n_sites) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  SparseOperator<Real> h(dim, dim);
  for (auto [a, b] : ring_bonds(n_sites)) {
    h += lift_pauli<Real>(Pauli::plus, a, n_sites) * lift_pauli<Real>(Pauli::minus, b, n_sites);
    h += lift_pauli<Real>(Pauli::minus, a, n_sites) * lift_pauli<Real>(Pauli::plus, b, n_sites);
  }
  return h;
}

template <typename Real>
SparseOperator<Real> zz_bonds(int n_sites) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  SparseOperator<Real> h(dim, dim);
  for (auto [a, b] : ring_bonds(n_sites))
    h += lift_pauli<Real>(Pauli::z, a, n_sites) * lift_pauli<Real>(Pauli::z, b, n_sites);
  return h;
}

template <typename Real>
SparseOperator<Real> zeeman(int n_sites) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  SparseOperator<Real> h(dim, dim);
  for (int n = 1; n <= n_sites; ++n) h += lift_pauli<Real>(Pauli::z, n, n_sites);
  return h;
}

}  // namespace detail

/// sigma^kind acting on `site` (1-based), identity elsewhere. sigma^+ and
/// sigma^- are not Hermitian.
template <typename Real = double>
Operator<Real> pauli_site_operator(Pauli kind, int site, int n_sites) {
  return Operator<Real>(detail::lift_pauli<Real>(kind, site, n_sites));
}

/// Sum of sigma^z over all sites.
template <typename Real = double>
Operator<Real> total_magnetization(int n_sites) {
  detail::check_site(1, n_sites);
  return Operator<Real>(detail::zeeman<Real>(n_sites));
}

/// H = J sum_n (s+_n s-_{n+1} + s-_n s+_{n+1}) + B sum_n sz_n on a periodic
/// ring. The anisotropy field of `params` is ignored.
template <typename Real = double>
HermitianOperator<Real> build_xx_hamiltonian(const ModelParams& params) {
  params.validate();
  const int n = params.n_sites;
  detail::SparseOperator<Real> h = Real(params.coupling_j) * detail::xx_hopping<Real>(n) +
                                   Real(params.field_b) * detail::zeeman<Real>(n);
  return Operator<Real>(h);
}

/// XX Hamiltonian plus (J Delta / 2) sum_n sz_n sz_{n+1}.
template <typename Real = double>
HermitianOperator<Real> build_xxz_hamiltonian(const ModelParams& params) {
  params.validate();
  const int n = params.n_sites;
  const Real zz = Real(params.coupling_j) * Real(params.anisotropy_delta) / Real(2);
  detail::SparseOperator<Real> h = Real(params.coupling_j) * detail::xx_hopping<Real>(n) +
                                   Real(params.field_b) * detail::zeeman<Real>(n);
  if (zz != Real(0)) h += zz * detail::zz_bonds<Real>(n);
  return Operator<Real>(h);
}

/// Permutation taking the state on site n to site n+1 (cyclically).
template <typename Real = double>
Operator<Real> translation_operator(int n_sites) {
  detail::check_site(1, n_sites);
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Operator<Real> t = Operator<Real>::Zero(dim, dim);
  for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(dim); ++i) {
    // site k moves to site k+1: bits shift one place toward the low end,
    // the last site's bit wraps around to the most significant position.
    const std::uint32_t last = i & 1u;
    const std::uint32_t shifted = (i >> 1) | (last << (n_sites - 1));
    t(shifted, i) = std::complex<Real>(1);
  }
  return t;
}

}  // namespace xxring
