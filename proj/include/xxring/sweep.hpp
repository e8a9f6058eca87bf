#pragma once

// Parameter grids over (B, T, Delta), critical temperatures, and the preset
// datasets behind the thermal-entanglement figures.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xxring/spin_model.hpp"

namespace xxring {

enum class Quantity { c_alternate, c_nearest, q, ic, z, energy };

std::string_view quantity_name(Quantity q);
Quantity parse_quantity(std::string_view name);

/// Ordered sample points of one grid axis.
struct Axis {
  std::vector<double> values;

  static Axis fixed(double value) { return Axis{{value}}; }
  static Axis linspace(double min, double max, int count);
  static Axis list(std::vector<double> values) { return Axis{std::move(values)}; }

  std::size_t size() const { return values.size(); }
};

/// How Q and IC are evaluated. Both measures are defined for pure states, so
/// by default they are taken on the ground manifold (the T -> 0 state)
/// whatever the T axis holds; `thermal` applies the purity formula to rho(T).
enum class PureStateMeasures { ground_manifold, thermal };

struct GridSpec {
  ModelParams model;  // field_b / anisotropy_delta are overridden by the axes
  Axis b = Axis::fixed(0.0);
  Axis t = Axis::fixed(1.0);
  Axis delta = Axis::fixed(0.0);
  std::vector<Quantity> quantities{Quantity::c_alternate};

  /// Replace the T axis by the ground-manifold state (rows carry t = 0).
  bool zero_temperature = false;
  /// Use the four-site closed forms for C_alternate and Z where they apply.
  bool analytic_fast_path = false;
  PureStateMeasures pure_state_measures = PureStateMeasures::ground_manifold;

  std::pair<int, int> alternate_pair{1, 3};
  std::pair<int, int> nearest_pair{1, 2};
  /// Worker threads; 0 picks XXRING_THREADS or the hardware concurrency.
  int threads = 1;

  void validate() const;
};

struct SweepRow {
  double j = 0;
  double b = 0;
  double t = 0;
  double delta = 0;
  std::string quantity;
  double value = 0;
  std::string error;  // empty when the value is valid, value is NaN otherwise
};

/// Rows ordered by (quantity, Delta, T, B), axis order within each key.
struct SweepTable {
  std::vector<SweepRow> rows;

  bool has_errors() const;
  /// Rows of one quantity, in table order.
  std::vector<SweepRow> select(std::string_view quantity) const;
};

SweepTable run_sweep(const GridSpec& spec);

/// Resolve a thread request (0 = auto) to a concrete worker count.
int resolve_thread_count(int requested);

enum class Branch { lower, upper };
std::string_view branch_name(Branch b);

struct CriticalTemperature {
  double t_c = 0;
  /// lower: C = 0 below and C > 0 above; upper: C > 0 below and C = 0 above.
  Branch branch = Branch::upper;
};

struct CriticalTemperatureOptions {
  double t_min = 0.01;
  double t_max = 5.0;
  double tol = 1e-6;
  int scan_points = 64;
  /// C > epsilon counts as entangled.
  double epsilon = 1e-12;
  int n_sites = 4;
  std::pair<int, int> pair{1, 3};
};

/// Boundaries between C = 0 and C > 0 along T: a 64-point log scan of the
/// bracket followed by bisection of every change of the indicator C > epsilon.
std::vector<CriticalTemperature> critical_temperature(double j, double b, double delta,
                                                      const CriticalTemperatureOptions& opts = {});

/// ((sqrt2 - 1)|J|, |J|): fields where the ground level changes.
std::pair<double, double> critical_fields(double j);

struct BoundaryCurve {
  struct Point {
    double b = 0;
    double t_c = 0;
    Branch branch = Branch::upper;
  };
  std::vector<Point> points;
  double solver_tol = 0;
};

/// Points where C(T) crosses `level` along one B column of a figure grid.
struct ContourPoint {
  double level = 0;
  double b = 0;
  double t = 0;
};

enum class FigureId { fig1a, fig1b, fig2a, fig2b, fig2c, fig3a, fig3b };

std::string_view figure_name(FigureId id);
FigureId parse_figure(std::string_view name);
const std::vector<FigureId>& all_figures();

/// Grid behind a preset figure.
GridSpec figure_grid(FigureId id);

struct FigureData {
  SweepTable table;
  std::optional<BoundaryCurve> boundary;  // fig1b: the C = 0 curve
  std::vector<ContourPoint> contours;     // fig1b: C = 0.5, 0.3, 0.1 crossings
};

FigureData figure_dataset(FigureId id, int threads = 1, double coupling_j = 1.0);

}  // namespace xxring
