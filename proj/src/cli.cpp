#include "xxring/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "xxring/analytic_xx4.hpp"
#include "xxring/entanglement.hpp"
#include "xxring/spectral.hpp"
#include "xxring/spin_model.hpp"
#include "xxring/sweep.hpp"
#include "xxring/table_io.hpp"
#include "xxring/validation.hpp"

namespace xxring {

namespace {

namespace fs = std::filesystem;

/// Bad flag values found after CLI11 parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double j = 1.0;
  double b = 0.0;
  std::optional<double> t;
  double delta = 0.0;
  int n_sites = 4;
  std::string output;
  std::string format = "csv";
  std::string threads = "auto";
  std::uint64_t seed = 7;

  ModelParams model() const {
    ModelParams p;
    p.coupling_j = j;
    p.field_b = b;
    p.anisotropy_delta = delta;
    p.n_sites = n_sites;
    return p;
  }

  int thread_count() const {
    if (threads == "auto") return resolve_thread_count(0);
    try {
      const int n = std::stoi(threads);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw UsageError("--threads must be a positive integer or 'auto'");
  }

  void check() const {
    for (double v : {j, b, delta})
      if (!std::isfinite(v)) throw UsageError("model parameters must be finite");
    try {
      model().validate();
      parse_table_format(format);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (t && !(*t >= 0.0)) throw UsageError("--t must be non-negative");
    thread_count();
  }
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("bad number '" + s + "' for " + what);
}

std::pair<int, int> parse_pair(const std::string& text, int n_sites) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError("--pair expects i,j");
  const int i = static_cast<int>(to_double(parts[0], "--pair"));
  const int k = static_cast<int>(to_double(parts[1], "--pair"));
  if (i < 1 || k < 1 || i > n_sites || k > n_sites || i == k) throw UsageError("--pair sites out of range");
  return {std::min(i, k), std::max(i, k)};
}

/// "v" -> fixed axis, "min,max,count" -> evenly spaced axis.
Axis parse_axis(const std::string& text, const std::string& what) {
  const auto parts = split(text, ',');
  try {
    if (parts.size() == 1) return Axis::fixed(to_double(parts[0], what));
    if (parts.size() == 3)
      return Axis::linspace(to_double(parts[0], what), to_double(parts[1], what),
                            static_cast<int>(to_double(parts[2], what)));
  } catch (const std::invalid_argument& e) {
    throw UsageError(what + ": " + e.what());
  }
  throw UsageError(what + " expects 'value' or 'min,max,count'");
}

/// Output sink: the -o file when given, otherwise stdout. Opened only after
/// every flag has been checked.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  body(file);
  if (!file) throw std::runtime_error("failed writing '" + path.string() + "'");
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const auto params = cfg.model();
  const auto spec = eigendecompose(build_xxz_hamiltonian(params));
  const bool closed_form = params.n_sites == xx4::kSites && params.anisotropy_delta == 0.0;

  std::vector<std::pair<double, int>> labelled;
  if (closed_form) {
    const auto e = xx4::analytic_spectrum(params.coupling_j, params.field_b);
    for (int k = 0; k < xx4::kLevels; ++k) labelled.emplace_back(e[std::size_t(k)], k);
    std::stable_sort(labelled.begin(), labelled.end());
  }

  Sink sink(cfg.output, out);
  auto& os = sink.get();
  os << "level,numeric,analytic,abs_deviation\n";
  double worst = 0;
  for (Eigen::Index k = 0; k < spec.dimension(); ++k) {
    const double numeric = spec.eigenvalues(k);
    if (closed_form) {
      const auto [value, label] = labelled[std::size_t(k)];
      const double dev = std::abs(numeric - value);
      worst = std::max(worst, dev);
      os << 'E' << label << ',' << format_double(numeric) << ',' << format_double(value) << ','
         << format_double(dev) << '\n';
    } else {
      os << k << ',' << format_double(numeric) << ",absent,absent\n";
    }
  }
  if (closed_form) os << "# max_abs_deviation," << format_double(worst) << '\n';
  return kExitOk;
}

int cmd_state(const RunConfig& cfg, bool zero_temp, const std::string& keep_text, std::ostream& out) {
  const auto params = cfg.model();
  std::optional<SiteSubset> keep;
  if (!keep_text.empty()) {
    std::vector<int> sites;
    for (const auto& s : split(keep_text, ',')) sites.push_back(static_cast<int>(to_double(s, "--keep")));
    try {
      keep.emplace(sites);
      keep->check_within(params.n_sites);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--keep: ") + e.what());
    }
  }
  const auto spec = eigendecompose(build_xxz_hamiltonian(params));
  DensityMatrix<double> rho = zero_temp ? ground_state_projector(spec) : gibbs_state(spec, Temperature(*cfg.t));
  int n = params.n_sites;
  if (keep) {
    rho = partial_trace(rho, *keep, params.n_sites);
    n = static_cast<int>(keep->size());
  }

  Sink sink(cfg.output, out);
  auto& os = sink.get();
  os << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < rho.rows(); ++r)
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      if (rho(r, c) == std::complex<double>(0)) continue;
      os << BasisState(std::uint32_t(r), n).to_string() << ',' << BasisState(std::uint32_t(c), n).to_string()
         << ',' << format_double(rho(r, c).real()) << ',' << format_double(rho(r, c).imag()) << '\n';
    }
  return kExitOk;
}

int cmd_concurrence(const RunConfig& cfg, bool zero_temp, const std::string& pair_text, bool full,
                    std::ostream& out) {
  const auto params = cfg.model();
  const auto [i, k] = parse_pair(pair_text, params.n_sites);
  const auto spec = eigendecompose(build_xxz_hamiltonian(params));
  const auto rho = zero_temp ? ground_state_projector(spec) : gibbs_state(spec, Temperature(*cfg.t));

  Sink sink(cfg.output, out);
  auto& os = sink.get();
  os << "quantity,value\n";
  if (!full) {
    os << "C_" << i << '_' << k << ',' << format_double(pair_concurrence(rho, i, k, params.n_sites)) << '\n';
    return kExitOk;
  }
  const auto report = full_report(rho, params.n_sites);
  os << "C_" << i << '_' << k << ',' << format_double(report.pair(i, k)) << '\n';
  for (const auto& [pair, c] : report.pair_concurrences)
    os << "C_" << pair.first << '_' << pair.second << ',' << format_double(c) << '\n';
  for (std::size_t s = 0; s < report.i_concurrences.size(); ++s)
    os << "IC_" << s + 1 << ',' << format_double(report.i_concurrences[s]) << '\n';
  os << "Q," << format_double(report.global_q) << '\n';
  os << "residual," << format_double(report.residual) << '\n';
  return kExitOk;
}

struct SweepFlags {
  std::string b_axis, t_axis, delta_axis;
  std::string quantities = "C_alternate";
  bool zero_temp = false;
  bool analytic = false;
  bool thermal_pure = false;
};

int cmd_sweep(const RunConfig& cfg, const SweepFlags& flags, std::ostream& out) {
  GridSpec grid;
  grid.model = cfg.model();
  grid.b = flags.b_axis.empty() ? Axis::fixed(cfg.b) : parse_axis(flags.b_axis, "--b-range");
  grid.delta = flags.delta_axis.empty() ? Axis::fixed(cfg.delta) : parse_axis(flags.delta_axis, "--delta-range");
  if (!flags.t_axis.empty())
    grid.t = parse_axis(flags.t_axis, "--t-range");
  else if (cfg.t)
    grid.t = Axis::fixed(*cfg.t);
  else if (!flags.zero_temp)
    throw UsageError("sweep needs --t, --t-range or --zero-temp");
  grid.zero_temperature = flags.zero_temp;
  grid.analytic_fast_path = flags.analytic;
  grid.pure_state_measures = flags.thermal_pure ? PureStateMeasures::thermal : PureStateMeasures::ground_manifold;
  grid.threads = cfg.thread_count();
  grid.quantities.clear();
  try {
    for (const auto& q : split(flags.quantities, ',')) grid.quantities.push_back(parse_quantity(q));
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const auto table = run_sweep(grid);
  Sink sink(cfg.output, out);
  write_table(sink.get(), table, parse_table_format(cfg.format));
  return kExitOk;
}

/// Writes one preset. fig1b (or --all) treats `target` as a directory.
void emit_figure(FigureId id, const RunConfig& cfg, const fs::path& target, bool directory, bool contours,
                 std::ostream& out) {
  const auto data = figure_dataset(id, cfg.thread_count(), cfg.j);
  const auto format = parse_table_format(cfg.format);
  const std::string ext = format == TableFormat::csv ? ".csv" : ".jsonl";
  auto table_writer = [&](std::ostream& os) { write_table(os, data.table, format); };

  if (!directory) {
    if (target.empty())
      table_writer(out);
    else
      write_file(target, table_writer);
    return;
  }
  fs::create_directories(target);
  const std::string stem(figure_name(id));
  write_file(target / (id == FigureId::fig1b ? "grid" + ext : stem + ext), table_writer);
  if (data.boundary)
    write_file(target / "boundary.csv", [&](std::ostream& os) { write_boundary_csv(os, *data.boundary); });
  if (contours && !data.contours.empty())
    write_file(target / "contours.csv", [&](std::ostream& os) { write_contours_csv(os, data.contours); });
}

int cmd_figure(const RunConfig& cfg, const std::string& id_text, bool all, bool contours, std::ostream& out) {
  std::vector<FigureId> ids;
  try {
    if (all)
      ids = all_figures();
    else if (!id_text.empty())
      ids = {parse_figure(id_text)};
    else
      throw UsageError("figure needs an id (fig1a ... fig3b) or --all");
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const bool needs_dir = all || ids.front() == FigureId::fig1b;
  if (needs_dir && cfg.output.empty()) throw UsageError("this figure writes several files; give -o <directory>");

  for (FigureId id : ids) {
    fs::path target = cfg.output;
    if (all && id == FigureId::fig1b) target /= "fig1b";
    emit_figure(id, cfg, target, needs_dir, contours, out);
  }
  return kExitOk;
}

int cmd_tc(const RunConfig& cfg, const CriticalTemperatureOptions& base, const std::string& pair_text,
           std::ostream& out) {
  CriticalTemperatureOptions opts = base;
  opts.n_sites = cfg.n_sites;
  opts.pair = parse_pair(pair_text, cfg.n_sites);
  if (!(opts.t_min > 0) || !(opts.t_max > opts.t_min) || !(opts.tol > 0))
    throw UsageError("need 0 < --t-min < --t-max and --tol > 0");

  const auto roots = critical_temperature(cfg.j, cfg.b, cfg.delta, opts);
  Sink sink(cfg.output, out);
  auto& os = sink.get();
  os << "b,t_c,branch\n";
  for (const auto& r : roots) os << format_double(cfg.b) << ',' << format_double(r.t_c) << ',' << branch_name(r.branch) << '\n';
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, int draws, bool quick, std::ostream& out) {
  if (draws < 0) throw UsageError("--draws must be >= 0");
  ValidationOptions opts;
  opts.seed = cfg.seed;
  opts.draws = draws;
  opts.quick = quick;
  opts.threads = cfg.thread_count();
  const auto start = std::chrono::steady_clock::now();
  const auto results = run_validation(opts);
  bool all_ok = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  (" << r.detail << ")\n";
    all_ok = all_ok && r.passed;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << (all_ok ? "all checks passed" : "some checks FAILED") << " in " << secs << " s\n";
  return all_ok ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermal entanglement in Heisenberg XX/XXZ spin rings"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  double t_value = 0;
  app.add_option("--j", cfg.j, "coupling J")->capture_default_str();
  app.add_option("--b", cfg.b, "magnetic field B")->capture_default_str();
  auto* t_opt = app.add_option("--t", t_value, "temperature T (k = 1)");
  app.add_option("--delta", cfg.delta, "anisotropy Delta")->capture_default_str();
  app.add_option("--n-sites", cfg.n_sites, "ring length N (2..12)")->capture_default_str();
  app.add_option("-o,--output", cfg.output, "output file (directory for fig1b / --all)");
  app.add_option("--format", cfg.format, "csv or json-lines")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads or 'auto' (XXRING_THREADS)")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed for validate")->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum", "numeric and closed-form eigenvalues");

  bool zero_temp = false;
  std::string keep_text;
  auto* state = app.add_subcommand("state", "thermal (or ground-manifold) density matrix");
  state->add_flag("--zero-temp", zero_temp, "use the T -> 0 ground-manifold state");
  state->add_option("--keep", keep_text, "keep only these sites, e.g. 1,3");

  std::string pair_text = "1,3";
  bool full = false;
  auto* conc = app.add_subcommand("concurrence", "pair concurrence, optionally IC_i, Q and residual");
  conc->add_flag("--zero-temp", zero_temp, "use the T -> 0 ground-manifold state");
  conc->add_option("--pair", pair_text, "sites i,j")->capture_default_str();
  conc->add_flag("--full", full, "report every pair, IC_i, Q and residual");

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "evaluate quantities over a (B, T, Delta) grid");
  sweep->add_option("--b-range", sweep_flags.b_axis, "B axis: value or min,max,count");
  sweep->add_option("--t-range", sweep_flags.t_axis, "T axis: value or min,max,count");
  sweep->add_option("--delta-range", sweep_flags.delta_axis, "Delta axis: value or min,max,count");
  sweep->add_option("--quantities", sweep_flags.quantities, "C_alternate,C_nearest,Q,IC,Z,energy")
      ->capture_default_str();
  sweep->add_flag("--zero-temp", sweep_flags.zero_temp, "replace the T axis by the ground manifold");
  sweep->add_flag("--analytic", sweep_flags.analytic, "use four-site closed forms where they apply");
  sweep->add_flag("--thermal-pure", sweep_flags.thermal_pure, "evaluate Q and IC on rho(T) instead of the ground manifold");

  std::string figure_id;
  bool all_figures_flag = false;
  bool contours = false;
  auto* figure = app.add_subcommand("figure", "write a preset figure dataset");
  figure->add_option("id", figure_id, "fig1a fig1b fig2a fig2b fig2c fig3a fig3b");
  figure->add_flag("--all", all_figures_flag, "write all seven presets into -o <directory>");
  figure->add_flag("--contours", contours, "fig1b: also write C = 0.5/0.3/0.1 contours.csv");

  CriticalTemperatureOptions tc_opts;
  std::string tc_pair = "1,3";
  auto* tc = app.add_subcommand("tc", "critical temperatures where C switches on or off");
  tc->add_option("--t-min", tc_opts.t_min, "bracket start")->capture_default_str();
  tc->add_option("--t-max", tc_opts.t_max, "bracket end")->capture_default_str();
  tc->add_option("--tol", tc_opts.tol, "bisection tolerance")->capture_default_str();
  tc->add_option("--pair", tc_pair, "sites i,j")->capture_default_str();

  int draws = 0;
  bool quick = false;
  auto* validate = app.add_subcommand("validate", "run the self-check suite");
  validate->add_option("--draws", draws, "random draws per check (0 = defaults)");
  validate->add_flag("--quick", quick, "reduced sample counts");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "xxring: " << e.what() << '\n';
    return kExitUsage;
  }
  if (t_opt->count() > 0) cfg.t = t_value;

  try {
    cfg.check();
    const bool needs_t = state->parsed() || conc->parsed();
    if (needs_t && !zero_temp) {
      if (!cfg.t) throw UsageError("--t is required (or --zero-temp)");
      if (*cfg.t == 0.0) throw UsageError("T = 0 needs --zero-temp (ground-manifold state)");
    }

    if (spectrum->parsed()) return cmd_spectrum(cfg, out);
    if (state->parsed()) return cmd_state(cfg, zero_temp, keep_text, out);
    if (conc->parsed()) return cmd_concurrence(cfg, zero_temp, pair_text, full, out);
    if (sweep->parsed()) return cmd_sweep(cfg, sweep_flags, out);
    if (figure->parsed()) return cmd_figure(cfg, figure_id, all_figures_flag, contours, out);
    if (tc->parsed()) return cmd_tc(cfg, tc_opts, tc_pair, out);
    if (validate->parsed()) return cmd_validate(cfg, draws, quick, out);
  } catch (const UsageError& e) {
    err << "xxring: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "xxring: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace xxring
