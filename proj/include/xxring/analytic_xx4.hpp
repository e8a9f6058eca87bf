#pragma once

// Closed forms for the four-site periodic XX ring in a uniform field.
//
// Everything here is N = 4, Delta = 0 only. These serve as oracles for the
// numeric path (spin_model -> spectral -> entanglement) and as a fast path
// for sweeps.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <utility>

#include "xxring/spin_model.hpp"
#include "xxring/types.hpp"

namespace xxring::xx4 {

inline constexpr int kSites = 4;
inline constexpr int kLevels = 16;

/// E_0 .. E_15 in the labelling of the eigenstates below.
template <typename Real = double>
std::array<Real, kLevels> analytic_spectrum(Real j, Real b) {
  const Real r2 = std::sqrt(Real(2));
  return {-4 * b,       2 * j - 2 * b, -2 * b,    -2 * j - 2 * b, -2 * b,
          2 * r2 * j,   -2 * r2 * j,   Real(0),   Real(0),        Real(0),
          Real(0),      2 * j + 2 * b, 2 * b,     -2 * j + 2 * b, 2 * b,
          4 * b};
}

/// The sixteen eigenvectors, column k = |psi_k>. They do not depend on J or B.
template <typename Real = double>
Operator<Real> analytic_eigenstates() {
  using C = std::complex<Real>;
  using Term = std::pair<const char*, C>;
  const Real h = Real(1) / 2;
  const Real q = std::sqrt(Real(2)) / 4;
  const Real s = Real(1) / std::sqrt(Real(2));
  const C i(0, 1);

  const std::array<std::initializer_list<Term>, kLevels> table = {{
      {{"0000", C(1)}},
      {{"0001", C(h)}, {"0010", C(h)}, {"0100", C(h)}, {"1000", C(h)}},
      {{"0001", C(h)}, {"0010", i * h}, {"0100", C(-h)}, {"1000", -i * h}},
      {{"0001", C(h)}, {"0010", C(-h)}, {"0100", C(h)}, {"1000", C(-h)}},
      {{"0001", C(h)}, {"0010", -i * h}, {"0100", C(-h)}, {"1000", i * h}},
      {{"0011", C(q)}, {"0110", C(q)}, {"1100", C(q)}, {"1001", C(q)}, {"0101", C(h)}, {"1010", C(h)}},
      {{"0011", C(q)}, {"0110", C(q)}, {"1100", C(q)}, {"1001", C(q)}, {"0101", C(-h)}, {"1010", C(-h)}},
      {{"0011", C(h)}, {"0110", i * h}, {"1100", C(-h)}, {"1001", -i * h}},
      {{"0011", C(h)}, {"0110", C(-h)}, {"1100", C(h)}, {"1001", C(-h)}},
      {{"0101", C(s)}, {"1010", C(-s)}},
      {{"0011", C(h)}, {"0110", -i * h}, {"1100", C(-h)}, {"1001", i * h}},
      {{"1110", C(h)}, {"1101", C(h)}, {"1011", C(h)}, {"0111", C(h)}},
      {{"1110", C(h)}, {"1101", i * h}, {"1011", C(-h)}, {"0111", -i * h}},
      {{"1110", C(h)}, {"1101", C(-h)}, {"1011", C(h)}, {"0111", C(-h)}},
      {{"1110", C(h)}, {"1101", -i * h}, {"1011", C(-h)}, {"0111", i * h}},
      {{"1111", C(1)}},
  }};

  Operator<Real> states = Operator<Real>::Zero(kLevels, kLevels);
  for (int k = 0; k < kLevels; ++k)
    for (const auto& [ket, amp] : table[static_cast<std::size_t>(k)])
      states(BasisState::from_bits(ket).index(), k) = amp;
  return states;
}

/// Entries of Z * rho_13 in the basis {|00>, |01>, |10>, |11>}:
///
///   | u 0 0 0 |
///   | 0 w y 0 |
///   | 0 y w 0 |
///   | 0 0 0 v |
///
/// with w = (Z - u - v) / 2. When the Boltzmann sums would overflow, every
/// field (including z_partition) is multiplied by exp(-log_scale); ratios and
/// the concurrence are unaffected.
template <typename Real = double>
struct Rho13Entries {
  Real u = 0;
  Real v = 0;
  Real w = 0;
  Real y = 0;
  Real z_partition = 0;
  Real log_scale = 0;

  Operator<Real> reduced_state() const {
    Operator<Real> rho = Operator<Real>::Zero(4, 4);
    rho(0, 0) = u;
    rho(1, 1) = rho(2, 2) = w;
    rho(1, 2) = rho(2, 1) = y;
    rho(3, 3) = v;
    return rho / z_partition;
  }
};

template <typename Real = double>
Rho13Entries<Real> analytic_rho13(Real j, Real b, Real t) {
  if (!(t > Real(0))) throw DomainError("analytic_rho13: temperature must be positive");
  const Real beta = Real(1) / t;
  const Real ap = (2 * j + 2 * b) * beta;  // (2J + 2B) beta
  const Real am = (2 * j - 2 * b) * beta;  // (2J - 2B) beta
  const Real sj = 2 * std::sqrt(Real(2)) * j * beta;
  const Real p = 2 * b * beta;
  const Real q = 4 * b * beta;

  // Factor out the largest exponent only when something would overflow.
  const Real largest = std::max({std::abs(ap), std::abs(am), std::abs(sj), std::abs(p), std::abs(q)});
  const Real shift = largest > Real(600) ? largest : Real(0);
  auto ex = [shift](Real x) { return std::exp(x - shift); };
  auto ch = [&ex](Real x) { return (ex(x) + ex(-x)) / 2; };
  const Real one = ex(Real(0));

  Rho13Entries<Real> r;
  r.log_scale = shift;
  r.u = (one + ex(ap) + ex(-am) + ch(sj)) / 2 + ex(p) + ex(q);
  r.v = (one + ex(-ap) + ex(am) + ch(sj)) / 2 + ex(-p) + ex(-q);
  r.y = (-one + ch(ap) + ch(am) + ch(sj)) / 2 - ch(p);
  r.z_partition = 4 * (one + ch(p)) + 2 * (ch(q) + ch(ap) + ch(am) + ch(sj));
  r.w = (r.z_partition - r.u - r.v) / 2;
  return r;
}

/// Closed-form partition function of the four-site XX ring.
template <typename Real = double>
Real analytic_partition(Real j, Real b, Real t) {
  const auto r = analytic_rho13(j, b, t);
  if (r.log_scale != Real(0)) throw std::overflow_error("analytic_partition: Z overflows");
  return r.z_partition;
}

/// C_13 = (2/Z) max(|y| - sqrt(u v), 0).
template <typename Real = double>
Real analytic_concurrence_alternate(Real j, Real b, Real t) {
  const auto r = analytic_rho13(j, b, t);
  return Real(2) / r.z_partition * std::max(std::abs(r.y) - std::sqrt(r.u * r.v), Real(0));
}

/// Crossings of the ground level: E_6 = E_3 at |B| = (sqrt2 - 1)|J|, E_3 = E_0 at |B| = |J|.
inline std::pair<double, double> ground_crossings(double j) {
  return {(std::sqrt(2.0) - 1.0) * std::abs(j), std::abs(j)};
}

/// T -> 0 limit of C_13: 1/2 strictly between the two crossings, 0 outside.
/// At an exact crossing the limit state is a degenerate mixture and this
/// throws DegeneratePointError; use ground_state_projector + wootters_concurrence.
inline double zero_temperature_concurrence(double j, double b, double crossing_tol = 1e-12) {
  const auto [low, high] = ground_crossings(j);
  const double field = std::abs(b);
  const double tol = crossing_tol * std::max(1.0, std::abs(j));
  if (std::abs(field - low) <= tol || std::abs(field - high) <= tol)
    throw DegeneratePointError("zero_temperature_concurrence: field sits on a ground-state crossing");
  return (field > low && field < high) ? 0.5 : 0.0;
}

}  // namespace xxring::xx4
