#include "xxring/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "xxring/analytic_xx4.hpp"
#include "xxring/entanglement.hpp"
#include "xxring/spectral.hpp"
#include "xxring/spin_model.hpp"
#include "xxring/sweep.hpp"

namespace xxring {

namespace {

const double kSqrt2 = std::sqrt(2.0);

struct Context {
  std::mt19937_64 rng;
  int draws;
  bool quick;
  int threads;

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

  /// Sample count: explicit --draws wins, then quick/full defaults.
  int samples(int full, int quick_count) const {
    if (draws > 0) return draws;
    return quick ? quick_count : full;
  }
};

ModelParams ring(double j, double b, double delta = 0.0, int n = 4) {
  ModelParams p;
  p.coupling_j = j;
  p.field_b = b;
  p.anisotropy_delta = delta;
  p.n_sites = n;
  return p;
}

SpectralDecomposition<double> solve(double j, double b, double delta = 0.0) {
  return eigendecompose(build_xxz_hamiltonian(ring(j, b, delta)));
}

double c_pair(double j, double b, double t, int i, int k, double delta = 0.0) {
  const auto spec = solve(j, b, delta);
  const auto rho = t > 0 ? gibbs_state(spec, Temperature(t)) : ground_state_projector(spec);
  return pair_concurrence(rho, i, k, 4);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

CheckResult spectrum_check(Context& ctx) {
  double worst = 0;
  const int n = ctx.samples(100, 20);
  for (int k = 0; k < n; ++k) {
    const double b = ctx.uniform(-3, 3);
    auto numeric = solve(1.0, b).eigenvalues;
    auto closed = xx4::analytic_spectrum(1.0, b);
    std::sort(closed.begin(), closed.end());
    for (int i = 0; i < xx4::kLevels; ++i) worst = std::max(worst, std::abs(numeric(i) - closed[std::size_t(i)]));
  }
  return {"1 spectrum vs closed form", worst <= 1e-10, "max |dE| = " + fmt(worst)};
}

CheckResult partition_check(Context& ctx) {
  const int n = ctx.quick ? 8 : 20;
  const auto bs = Axis::linspace(-2, 2, n).values;
  const auto ts = Axis::linspace(0.05, 5, n).values;
  double worst = 0;
  for (double b : bs) {
    const auto spec = solve(1.0, b);
    for (double t : ts) {
      const double z = partition_function(spec, Temperature(t));
      const double closed = xx4::analytic_partition(1.0, b, t);
      worst = std::max(worst, std::abs(z - closed) / closed);
    }
  }
  return {"2 partition function vs closed form", worst <= 1e-9, "max rel err = " + fmt(worst)};
}

CheckResult rho13_check(Context& ctx) {
  double worst = 0;
  const int n = ctx.samples(50, 15);
  for (int k = 0; k < n; ++k) {
    const double b = ctx.uniform(-2, 2);
    const double t = ctx.uniform(0.05, 5);
    const auto rho = partial_trace(gibbs_state(solve(1.0, b), Temperature(t)), SiteSubset{1, 3}, 4);
    const auto closed = xx4::analytic_rho13(1.0, b, t).reduced_state();
    worst = std::max(worst, (rho - closed).cwiseAbs().maxCoeff());
  }
  return {"3 reduced state rho13 vs closed form", worst <= 1e-10, "max entry err = " + fmt(worst)};
}

CheckResult concurrence_check(Context& ctx) {
  double worst = 0;
  const int n = ctx.samples(200, 40);
  for (int k = 0; k < n; ++k) {
    const double j = ctx.uniform(-2, 2);
    const double b = ctx.uniform(-2, 2);
    const double t = ctx.uniform(0.05, 5);
    worst = std::max(worst, std::abs(c_pair(j, b, t, 1, 3) - xx4::analytic_concurrence_alternate(j, b, t)));
  }
  return {"4 Wootters path vs closed-form concurrence", worst <= 1e-9, "max |dC| = " + fmt(worst)};
}

CheckResult zero_temperature_check(Context&) {
  bool ok = true;
  std::ostringstream detail;
  for (double b : {0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.5}) {
    const double c = c_pair(1.0, b, 0.001, 1, 3);
    const double expected = (b > 0.45 && b < 1.0) ? 0.5 : 0.0;
    ok = ok && std::abs(c - expected) < 1e-3;
    detail << "B=" << b << ":" << fmt(c) << " ";
  }
  return {"5 zero-temperature step", ok, detail.str()};
}

/// B where C_13(T) crosses `level` between two grid points, refined by bisection.
std::vector<double> level_edges(double t, double level) {
  const auto bs = Axis::linspace(0.0, 1.5, 301).values;
  auto f = [&](double b) { return c_pair(1.0, b, t, 1, 3) - level; };
  std::vector<double> edges;
  double prev = f(bs[0]);
  for (std::size_t k = 1; k < bs.size(); ++k) {
    const double cur = f(bs[k]);
    if ((prev > 0) != (cur > 0)) {
      double lo = bs[k - 1], hi = bs[k];
      const bool lo_pos = prev > 0;
      while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        ((f(mid) > 0) == lo_pos ? lo : hi) = mid;
      }
      edges.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  return edges;
}

CheckResult band_edge_check(Context&) {
  const auto edges = level_edges(0.01, 0.25);
  bool ok = edges.size() == 2 && std::abs(edges[0] - (kSqrt2 - 1)) <= 0.01 && std::abs(edges[1] - 1.0) <= 0.01;
  std::string detail = "edges:";
  for (double e : edges) detail += " " + fmt(e);
  return {"6 entangled band edges at T=0.01", ok, detail};
}

CheckResult nearest_plateau_check(Context&) {
  const double plateau = c_pair(1.0, 0.2, 0.01, 1, 2);
  const double expected = (2 * kSqrt2 - 1) / 4;
  double dip = 1;
  for (double b = 0.35; b <= 0.48; b += 0.0025) dip = std::min(dip, c_pair(1.0, b, 0.01, 1, 2));
  const double upper = c_pair(1.0, 0.7, 0.01, 1, 2);
  const bool ok = std::abs(plateau - expected) <= 5e-3 && dip < plateau && dip < upper;
  return {"7 nearest-neighbour plateau and dip", ok,
          "C12(0.2)=" + fmt(plateau) + " dip=" + fmt(dip) + " C12(0.7)=" + fmt(upper)};
}

CheckResult ground_identities_check(Context&) {
  const auto low = full_report(ground_state_projector(solve(1.0, 0.2)), 4);
  const auto mid = full_report(ground_state_projector(solve(1.0, 0.7)), 4);
  double sum_sq = 0;
  for (const auto& [pair, c] : mid.pair_concurrences) sum_sq += c * c;
  bool ok = true;
  for (double ic : low.i_concurrences) ok = ok && std::abs(ic - 1.0) <= 1e-9;
  for (double ic : mid.i_concurrences) ok = ok && std::abs(ic - std::sqrt(3.0) / 2) <= 1e-9;
  ok = ok && std::abs(mid.global_q - 0.5 * sum_sq) <= 1e-9;
  ok = ok && std::abs(low.residual - (4 * kSqrt2 - 5) / 4) <= 1e-9;
  return {"8 ground-manifold IC, Q and residual identities", ok,
          "Q(0.7)=" + fmt(mid.global_q) + " residual(0.2)=" + fmt(low.residual)};
}

CheckResult critical_temperature_check(Context& ctx) {
  CriticalTemperatureOptions opts;
  opts.t_min = 0.01;
  opts.t_max = 5.0;
  auto roots = [&](double b) { return critical_temperature(1.0, b, 0.0, opts).size(); };
  const std::size_t r005 = roots(0.05), r025 = roots(0.25), r07 = roots(0.7), r12 = roots(1.2);

  // smallest field on a 0.005 grid with any boundary in the bracket
  double threshold = -1;
  const double step = ctx.quick ? 0.01 : 0.005;
  for (double b = step; b <= 0.3 + 1e-12; b += step)
    if (roots(b) > 0) {
      threshold = b;
      break;
    }
  const bool ok = r005 == 0 && r025 == 2 && r12 == 2 && r07 == 1 && std::abs(threshold - 0.09) <= 0.02;
  std::ostringstream detail;
  detail << "roots B=0.05:" << r005 << " B=0.25:" << r025 << " B=0.7:" << r07 << " B=1.2:" << r12
         << " threshold=" << fmt(threshold);
  return {"9 critical-temperature structure", ok, detail.str()};
}

CheckResult symmetry_check(Context& ctx) {
  GridSpec grid = figure_grid(FigureId::fig1a);
  if (ctx.quick) {
    grid.b = Axis::linspace(-2, 2, 41);
    grid.t = Axis::linspace(0.02, 2, 25);
  }
  grid.threads = ctx.threads;
  const auto pos = run_sweep(grid);
  grid.model.coupling_j = -1.0;
  const auto neg = run_sweep(grid);

  const std::size_t nb = grid.b.size();
  double parity = 0, sign = 0;
  for (std::size_t k = 0; k < pos.rows.size(); ++k) {
    const std::size_t mirror = k - k % nb + (nb - 1 - k % nb);
    parity = std::max(parity, std::abs(pos.rows[k].value - pos.rows[mirror].value));
    sign = std::max(sign, std::abs(pos.rows[k].value - neg.rows[k].value));
  }
  return {"10 field-parity and coupling-sign symmetry", parity <= 1e-10 && sign <= 1e-10,
          "max |C(B)-C(-B)| = " + fmt(parity) + ", max |C(J)-C(-J)| = " + fmt(sign)};
}

double peak_delta(double b, double t) {
  double best_c = -1, best_d = 0;
  for (double d : Axis::linspace(-1, 1, 201).values) {
    const double c = c_pair(1.0, b, t, 1, 3, d);
    if (c > best_c) {
      best_c = c;
      best_d = d;
    }
  }
  return best_d;
}

CheckResult anisotropy_check(Context&) {
  const double peak0 = peak_delta(0.0, 0.2);
  const double peak5 = peak_delta(0.5, 0.2);
  double positive_side = 0;
  for (double d : Axis::linspace(0, 1, 101).values) positive_side = std::max(positive_side, c_pair(1.0, 0.0, 0.2, 1, 3, d));
  const bool ok = std::abs(peak0 + 0.5) <= 0.02 && positive_side <= 1e-9 && peak5 > peak0;
  return {"11 anisotropy-induced entanglement", ok,
          "peak Delta(B=0)=" + fmt(peak0) + " peak Delta(B=0.5)=" + fmt(peak5) +
              " max C(Delta>=0, B=0)=" + fmt(positive_side)};
}

// Module invariants beyond the numbered checks.

CheckResult hamiltonian_invariants(Context& ctx) {
  double herm = 0, mag = 0, trans = 0, lin = 0;
  const int n = ctx.samples(20, 5);
  const auto sz = total_magnetization(4);
  const auto shift = translation_operator(4);
  for (int k = 0; k < n; ++k) {
    const auto p = ring(ctx.uniform(-3, 3), ctx.uniform(-3, 3), ctx.uniform(-2, 2));
    const auto h = build_xxz_hamiltonian(p);
    auto p0 = p;
    p0.field_b = 0;
    herm = std::max(herm, hermiticity_defect(h));
    mag = std::max(mag, (h * sz - sz * h).cwiseAbs().maxCoeff());
    trans = std::max(trans, (h * shift - shift * h).cwiseAbs().maxCoeff());
    lin = std::max(lin, (h - build_xxz_hamiltonian(p0) - p.field_b * sz).cwiseAbs().maxCoeff());
  }
  const bool ok = herm <= 1e-12 && mag <= 1e-12 && trans <= 1e-12 && lin <= 1e-14;
  return {"invariant: Hamiltonian symmetries", ok,
          "herm=" + fmt(herm) + " [H,Sz]=" + fmt(mag) + " [H,T]=" + fmt(trans) + " linearity=" + fmt(lin)};
}

CheckResult gibbs_invariants(Context& ctx) {
  double trace_err = 0, limit_err = 0;
  bool monotone = true;
  const int n = ctx.samples(10, 3);
  for (int k = 0; k < n; ++k) {
    const double b = ctx.uniform(-2, 2);
    const auto spec = solve(1.0, b, ctx.uniform(-1, 1));
    double prev_e = -1e300;
    for (int i = 0; i <= 50; ++i) {
      const Temperature t(std::pow(10.0, -2.0 + 5.0 * i / 50.0));
      trace_err = std::max(trace_err, std::abs(gibbs_state(spec, t).trace().real() - 1.0));
      const double e = thermal_energy(spec, t);
      monotone = monotone && e >= prev_e - 1e-12;
      prev_e = e;
    }
  }
  for (double b : {0.2, 0.7, 1.5}) {
    const auto spec = solve(1.0, b);
    limit_err = std::max(limit_err, (gibbs_state(spec, Temperature(1e-4)) - ground_state_projector(spec))
                                        .cwiseAbs()
                                        .maxCoeff());
  }
  const bool ok = trace_err <= 1e-10 && monotone && limit_err <= 1e-6;
  return {"invariant: Gibbs trace, energy monotonicity, T->0 limit", ok,
          "trace=" + fmt(trace_err) + " limit=" + fmt(limit_err) + (monotone ? "" : " energy not monotone")};
}

CheckResult closed_form_limit(Context&) {
  double worst = 0;
  for (double b : {0.1, 0.3, 0.5, 0.7, 0.9, 1.2, 2.0})
    worst = std::max(worst, std::abs(xx4::analytic_concurrence_alternate(1.0, b, 1e-3) -
                                     xx4::zero_temperature_concurrence(1.0, b)));
  return {"invariant: closed-form T->0 limit", worst <= 1e-3, "max dev = " + fmt(worst)};
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  Context ctx{std::mt19937_64(options.seed), options.draws, options.quick, resolve_thread_count(options.threads)};
  const std::vector<std::function<CheckResult(Context&)>> checks = {
      spectrum_check,          partition_check,        rho13_check,           concurrence_check,
      zero_temperature_check,  band_edge_check,        nearest_plateau_check, ground_identities_check,
      critical_temperature_check, symmetry_check,      anisotropy_check,      hamiltonian_invariants,
      gibbs_invariants,        closed_form_limit,
  };
  std::vector<CheckResult> results;
  for (const auto& check : checks) {
    try {
      results.push_back(check(ctx));
    } catch (const std::exception& e) {
      results.push_back({"(check threw)", false, e.what()});
    }
  }
  return results;
}

}  // namespace xxring
