#include "xxring/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <set>
#include <thread>

#include "xxring/analytic_xx4.hpp"
#include "xxring/entanglement.hpp"
#include "xxring/spectral.hpp"

namespace xxring {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct QuantityInfo {
  Quantity id;
  std::string_view name;
};

constexpr QuantityInfo kQuantities[] = {
    {Quantity::c_alternate, "C_alternate"}, {Quantity::c_nearest, "C_nearest"},
    {Quantity::q, "Q"},                     {Quantity::ic, "IC"},
    {Quantity::z, "Z"},                     {Quantity::energy, "energy"},
};

struct FigureInfo {
  FigureId id;
  std::string_view name;
};

constexpr FigureInfo kFigures[] = {
    {FigureId::fig1a, "fig1a"}, {FigureId::fig1b, "fig1b"}, {FigureId::fig2a, "fig2a"},
    {FigureId::fig2b, "fig2b"}, {FigureId::fig2c, "fig2c"}, {FigureId::fig3a, "fig3a"},
    {FigureId::fig3b, "fig3b"},
};

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
}

void check_pair(std::pair<int, int> pair, int n_sites, const char* what) {
  if (pair.first < 1 || pair.second > n_sites || pair.first >= pair.second)
    throw std::invalid_argument(std::string(what) + " must be sites i < j within the chain");
}

/// Everything one (Delta, B) task needs for all T values.
struct PointEvaluator {
  const GridSpec& spec;
  ModelParams params;
  SpectralDecomposition<double> decomposition;
  std::optional<DensityMatrix<double>> ground;

  PointEvaluator(const GridSpec& s, const ModelParams& p)
      : spec(s), params(p), decomposition(eigendecompose(build_xxz_hamiltonian(p))) {}

  bool closed_form_applies() const {
    return spec.analytic_fast_path && params.n_sites == xx4::kSites &&
           params.anisotropy_delta == 0.0;
  }

  const DensityMatrix<double>& ground_state() {
    if (!ground) ground = ground_state_projector(decomposition);
    return *ground;
  }

  double c_alternate(const Temperature& t, const DensityMatrix<double>& rho) {
    const auto [i, j] = spec.alternate_pair;
    if (closed_form_applies() && i == 1 && j == 3) {
      if (!t.is_zero())
        return xx4::analytic_concurrence_alternate(params.coupling_j, params.field_b, t.value());
      try {
        return xx4::zero_temperature_concurrence(params.coupling_j, params.field_b);
      } catch (const DegeneratePointError&) {
        // exact crossing: fall through to the mixture state
      }
    }
    return pair_concurrence(rho, i, j, params.n_sites);
  }

  double evaluate(Quantity q, const Temperature& t, const DensityMatrix<double>& rho) {
    const int n = params.n_sites;
    switch (q) {
      case Quantity::c_alternate:
        return c_alternate(t, rho);
      case Quantity::c_nearest:
        return pair_concurrence(rho, spec.nearest_pair.first, spec.nearest_pair.second, n);
      case Quantity::q:
        return global_entanglement(pure_state(rho), n);
      case Quantity::ic:
        return i_concurrence(pure_state(rho), 1, n);
      case Quantity::z:
        if (t.is_zero()) throw DomainError("Z is undefined at T = 0");
        if (closed_form_applies())
          return xx4::analytic_partition(params.coupling_j, params.field_b, t.value());
        return partition_function(decomposition, t);
      case Quantity::energy:
        return thermal_energy(decomposition, t);
    }
    return kNaN;
  }

  const DensityMatrix<double>& pure_state(const DensityMatrix<double>& rho) {
    return spec.pure_state_measures == PureStateMeasures::ground_manifold ? ground_state() : rho;
  }
};

}  // namespace

std::string_view quantity_name(Quantity q) {
  for (const auto& info : kQuantities)
    if (info.id == q) return info.name;
  return "?";
}

Quantity parse_quantity(std::string_view name) {
  for (const auto& info : kQuantities)
    if (info.name == name) return info.id;
  throw std::invalid_argument("unknown quantity '" + std::string(name) + "'");
}

Axis Axis::linspace(double min, double max, int count) {
  if (count < 1) throw std::invalid_argument("axis count must be at least 1");
  if (!(min <= max)) throw std::invalid_argument("axis min must not exceed max");
  if (count == 1) return fixed(min);
  Axis axis;
  axis.values.reserve(static_cast<std::size_t>(count));
  const double step = (max - min) / (count - 1);
  for (int k = 0; k < count; ++k) axis.values.push_back(k + 1 == count ? max : min + k * step);
  return axis;
}

void GridSpec::validate() const {
  model.validate();
  for (const Axis* axis : {&b, &t, &delta}) {
    if (axis->values.empty()) throw std::invalid_argument("grid axes need at least one point");
    for (double v : axis->values)
      if (!std::isfinite(v)) throw std::invalid_argument("grid axes must be finite");
  }
  if (!zero_temperature)
    for (double v : t.values)
      if (!(v > 0.0)) throw std::invalid_argument("T axis must be strictly positive (or use zero_temperature)");
  if (quantities.empty()) throw std::invalid_argument("at least one quantity is required");
  check_pair(alternate_pair, model.n_sites, "alternate pair");
  check_pair(nearest_pair, model.n_sites, "nearest pair");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

bool SweepTable::has_errors() const {
  return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); });
}

std::vector<SweepRow> SweepTable::select(std::string_view quantity) const {
  std::vector<SweepRow> out;
  for (const auto& row : rows)
    if (row.quantity == quantity) out.push_back(row);
  return out;
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("XXRING_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

SweepTable run_sweep(const GridSpec& spec) {
  spec.validate();

  const std::set<Quantity> unique(spec.quantities.begin(), spec.quantities.end());
  const std::vector<Quantity> quantities(unique.begin(), unique.end());
  const std::vector<double> temps = spec.zero_temperature ? std::vector<double>{0.0} : spec.t.values;

  const std::size_t nq = quantities.size();
  const std::size_t nd = spec.delta.size();
  const std::size_t nt = temps.size();
  const std::size_t nb = spec.b.size();
  auto slot = [&](std::size_t q, std::size_t d, std::size_t t, std::size_t b) {
    return ((q * nd + d) * nt + t) * nb + b;
  };

  std::vector<double> values(nq * nd * nt * nb, kNaN);
  std::vector<std::string> errors(values.size());

  parallel_for(nd * nb, resolve_thread_count(spec.threads), [&](std::size_t task) {
    const std::size_t d = task / nb;
    const std::size_t b = task % nb;
    ModelParams params = spec.model;
    params.field_b = spec.b.values[b];
    params.anisotropy_delta = spec.delta.values[d];

    std::optional<PointEvaluator> eval;
    try {
      eval.emplace(spec, params);
    } catch (const std::exception& e) {
      for (std::size_t q = 0; q < nq; ++q)
        for (std::size_t t = 0; t < nt; ++t) errors[slot(q, d, t, b)] = e.what();
      return;
    }

    for (std::size_t t = 0; t < nt; ++t) {
      const Temperature temp(temps[t]);
      const DensityMatrix<double> rho = thermal_state(eval->decomposition, temp);
      for (std::size_t q = 0; q < nq; ++q) {
        try {
          values[slot(q, d, t, b)] = eval->evaluate(quantities[q], temp, rho);
        } catch (const std::exception& e) {
          errors[slot(q, d, t, b)] = e.what();
        }
      }
    }
  });

  SweepTable table;
  table.rows.reserve(values.size());
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t d = 0; d < nd; ++d)
      for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t b = 0; b < nb; ++b) {
          const std::size_t k = slot(q, d, t, b);
          table.rows.push_back({spec.model.coupling_j, spec.b.values[b], temps[t], spec.delta.values[d],
                                std::string(quantity_name(quantities[q])),
                                errors[k].empty() ? values[k] : kNaN, errors[k]});
        }
  return table;
}

std::string_view branch_name(Branch b) { return b == Branch::lower ? "lower" : "upper"; }

std::vector<CriticalTemperature> critical_temperature(double j, double b, double delta,
                                                      const CriticalTemperatureOptions& opts) {
  if (!(opts.t_min > 0.0) || !(opts.t_max > opts.t_min))
    throw std::invalid_argument("critical_temperature: need 0 < t_min < t_max");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("critical_temperature: tol must be positive");
  if (opts.scan_points < 2) throw std::invalid_argument("critical_temperature: need >= 2 scan points");

  ModelParams params;
  params.coupling_j = j;
  params.field_b = b;
  params.anisotropy_delta = delta;
  params.n_sites = opts.n_sites;
  check_pair(opts.pair, params.n_sites, "pair");
  const auto spec = eigendecompose(build_xxz_hamiltonian(params));

  auto entangled = [&](double t) {
    const auto rho = gibbs_state(spec, Temperature(t));
    return pair_concurrence(rho, opts.pair.first, opts.pair.second, params.n_sites) > opts.epsilon;
  };

  const double log_lo = std::log(opts.t_min);
  const double log_hi = std::log(opts.t_max);
  std::vector<double> grid(static_cast<std::size_t>(opts.scan_points));
  std::vector<bool> flags(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(grid.size() - 1);
    grid[k] = k + 1 == grid.size() ? opts.t_max : std::exp(log_lo + frac * (log_hi - log_lo));
    flags[k] = entangled(grid[k]);
  }

  std::vector<CriticalTemperature> out;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    if (flags[k] == flags[k + 1]) continue;
    double lo = grid[k];
    double hi = grid[k + 1];
    const bool low_side = flags[k];
    while (hi - lo > opts.tol) {
      const double mid = 0.5 * (lo + hi);
      (entangled(mid) == low_side ? lo : hi) = mid;
    }
    out.push_back({0.5 * (lo + hi), low_side ? Branch::upper : Branch::lower});
  }
  return out;
}

std::pair<double, double> critical_fields(double j) {
  if (j == 0.0) throw DomainError("critical_fields: J = 0 has no ground-state crossings");
  return xx4::ground_crossings(j);
}

std::string_view figure_name(FigureId id) {
  for (const auto& info : kFigures)
    if (info.id == id) return info.name;
  return "?";
}

FigureId parse_figure(std::string_view name) {
  for (const auto& info : kFigures)
    if (info.name == name) return info.id;
  throw std::invalid_argument("unknown figure '" + std::string(name) + "'");
}

const std::vector<FigureId>& all_figures() {
  static const std::vector<FigureId> ids = {FigureId::fig1a, FigureId::fig1b, FigureId::fig2a,
                                            FigureId::fig2b, FigureId::fig2c, FigureId::fig3a,
                                            FigureId::fig3b};
  return ids;
}

GridSpec figure_grid(FigureId id) {
  GridSpec g;
  g.model.coupling_j = 1.0;
  switch (id) {
    case FigureId::fig1a:
    case FigureId::fig1b:
      g.b = Axis::linspace(-2.0, 2.0, 121);
      g.t = Axis::linspace(0.02, 2.0, 100);
      g.quantities = {Quantity::c_alternate};
      break;
    case FigureId::fig2a:
    case FigureId::fig2b:
      g.b = Axis::linspace(0.0, 1.5, 301);
      g.t = Axis::list({0.01, 0.1, 0.5});
      g.quantities = {id == FigureId::fig2a ? Quantity::c_alternate : Quantity::c_nearest};
      break;
    case FigureId::fig2c:
      g.b = Axis::linspace(0.0, 1.5, 301);
      g.t = Axis::fixed(0.01);
      g.quantities = {Quantity::q, Quantity::ic};
      g.pure_state_measures = PureStateMeasures::ground_manifold;
      break;
    case FigureId::fig3a:
      g.b = Axis::fixed(0.5);
      g.t = Axis::linspace(0.02, 1.0, 50);
      g.delta = Axis::linspace(-0.4, 1.0, 71);
      g.quantities = {Quantity::c_alternate};
      break;
    case FigureId::fig3b:
      g.b = Axis::linspace(0.0, 1.0, 101);
      g.t = Axis::fixed(0.2);
      g.delta = Axis::linspace(-1.0, 1.0, 201);
      g.quantities = {Quantity::c_alternate};
      break;
  }
  return g;
}

namespace {

std::vector<ContourPoint> level_crossings(const SweepTable& table, const Axis& b_axis,
                                          const Axis& t_axis, double level, double j, double tol) {
  std::vector<ContourPoint> out;
  const std::size_t nb = b_axis.size();
  for (std::size_t ib = 0; ib < nb; ++ib) {
    ModelParams params;
    params.coupling_j = j;
    params.field_b = b_axis.values[ib];
    std::optional<SpectralDecomposition<double>> spec;
    auto c_at = [&](double t) {
      if (!spec) spec = eigendecompose(build_xx_hamiltonian(params));
      return pair_concurrence(gibbs_state(*spec, Temperature(t)), 1, 3, 4) - level;
    };
    for (std::size_t it = 0; it + 1 < t_axis.size(); ++it) {
      const double f0 = table.rows[it * nb + ib].value - level;
      const double f1 = table.rows[(it + 1) * nb + ib].value - level;
      if ((f0 > 0) == (f1 > 0)) continue;
      double lo = t_axis.values[it];
      double hi = t_axis.values[it + 1];
      const bool lo_above = f0 > 0;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        ((c_at(mid) > 0) == lo_above ? lo : hi) = mid;
      }
      out.push_back({level, b_axis.values[ib], 0.5 * (lo + hi)});
    }
  }
  return out;
}

}  // namespace

FigureData figure_dataset(FigureId id, int threads, double coupling_j) {
  GridSpec grid = figure_grid(id);
  grid.model.coupling_j = coupling_j;
  grid.threads = threads;

  FigureData data;
  data.table = run_sweep(grid);
  if (id != FigureId::fig1b) return data;

  CriticalTemperatureOptions opts;
  opts.t_min = grid.t.values.front();
  opts.t_max = grid.t.values.back();
  BoundaryCurve curve;
  curve.solver_tol = opts.tol;
  for (double b : grid.b.values)
    for (const auto& tc : critical_temperature(coupling_j, b, 0.0, opts))
      curve.points.push_back({b, tc.t_c, tc.branch});
  data.boundary = std::move(curve);

  for (double level : {0.5, 0.3, 0.1}) {
    auto pts = level_crossings(data.table, grid.b, grid.t, level, coupling_j, opts.tol);
    data.contours.insert(data.contours.end(), pts.begin(), pts.end());
  }
  return data;
}

}  // namespace xxring
