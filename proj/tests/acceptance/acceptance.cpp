// Acceptance gate: one PASS/FAIL line per criterion.
// usage: acceptance <path-to-xxring-cli> <scratch-dir>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "support/oracles.hpp"
#include "xxring/entanglement.hpp"
#include "xxring/spectral.hpp"
#include "xxring/spin_model.hpp"
#include "xxring/sweep.hpp"
#include "xxring/table_io.hpp"

using namespace xxring;
namespace fs = std::filesystem;

namespace {

const double kSqrt2 = std::sqrt(2.0);

std::string g_cli;
fs::path g_scratch;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Proc {
  int code;
  std::string out;
};

Proc shell(const std::string& args) {
  const std::string cmd = "'" + g_cli + "' " + args + " 2>&1";
  Proc p{-1, ""};
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return p;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) p.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

// Closed forms for the four-site ring, written out independently of the library.

std::vector<double> ring4_levels(double j, double b) {
  const double r = 2 * kSqrt2 * j;
  std::vector<double> e = {-4 * b, 2 * j - 2 * b, -2 * b, -2 * j - 2 * b, -2 * b, r, -r, 0, 0, 0, 0,
                           2 * j + 2 * b, 2 * b, -2 * j + 2 * b, 2 * b, 4 * b};
  std::sort(e.begin(), e.end());
  return e;
}

struct Rho13 {
  long double u, v, w, y, z;
};

Rho13 ring4_rho13(double j, double b, double t) {
  const long double be = 1.0L / t;
  auto ch = [](long double x) { return std::cosh(x); };
  const long double ap = (2 * j + 2 * b) * be, am = (2 * j - 2 * b) * be;
  const long double sj = 2 * std::sqrt(2.0L) * j * be, p = 2 * b * be, q = 4 * b * be;
  Rho13 r;
  r.u = 0.5L * (1 + std::exp(ap) + std::exp(-am) + ch(sj)) + std::exp(p) + std::exp(q);
  r.v = 0.5L * (1 + std::exp(-ap) + std::exp(am) + ch(sj)) + std::exp(-p) + std::exp(-q);
  r.y = 0.5L * (-1 + ch(ap) + ch(am) + ch(sj)) - ch(p);
  r.z = 4 * (1 + ch(p)) + 2 * (ch(q) + ch(ap) + ch(am) + ch(sj));
  r.w = (r.z - r.u - r.v) / 2;
  return r;
}

double ring4_c13(double j, double b, double t) {
  const auto r = ring4_rho13(j, b, t);
  return static_cast<double>(2 / r.z * std::max(std::abs(r.y) - std::sqrt(r.u * r.v), 0.0L));
}

ModelParams ring(double j, double b, double delta = 0.0) {
  ModelParams p;
  p.coupling_j = j;
  p.field_b = b;
  p.anisotropy_delta = delta;
  return p;
}

SpectralDecomposition<double> solve(double j, double b, double delta = 0.0) {
  return eigendecompose(build_xxz_hamiltonian(ring(j, b, delta)));
}

DensityMatrix<double> thermal(double j, double b, double t, double delta = 0.0) {
  return gibbs_state(solve(j, b, delta), Temperature(t));
}

double c_pair(double j, double b, double t, int i, int k, double delta = 0.0) {
  return pair_concurrence(thermal(j, b, t, delta), i, k, 4);
}

Outcome criterion_1() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-3, 3);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const double b = u(rng);
    const auto numeric = solve(1.0, b).eigenvalues;
    const auto closed = ring4_levels(1.0, b);
    const auto jacobi = oracle::jacobi_eigenvalues(oracle::brute_force_hamiltonian(1.0, b, 0.0, 4));
    for (int i = 0; i < 16; ++i) {
      worst = std::max(worst, std::abs(numeric(i) - closed[std::size_t(i)]));
      worst = std::max(worst, std::abs(jacobi[std::size_t(i)] - closed[std::size_t(i)]));
    }
  }
  return {worst <= 1e-10, "max |dE| = " + fmt(worst)};
}

Outcome criterion_2() {
  double worst = 0;
  for (int ib = 0; ib < 20; ++ib) {
    const double b = -2.0 + 4.0 * ib / 19;
    const auto spec = solve(1.0, b);
    for (int it = 0; it < 20; ++it) {
      const double t = 0.05 + 4.95 * it / 19;
      const long double closed = ring4_rho13(1.0, b, t).z;
      const long double z = std::exp(static_cast<long double>(log_partition_function(spec, Temperature(t))));
      worst = std::max(worst, static_cast<double>(std::abs(z - closed) / closed));
    }
  }
  return {worst <= 1e-9, "max rel err = " + fmt(worst)};
}

Outcome criterion_3() {
  // entries times Z, compared relative to Z
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> ub(-2, 2), ut(0.05, 5);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const double b = ub(rng), t = ut(rng);
    const auto r = ring4_rho13(1.0, b, t);
    const auto rho = partial_trace(thermal(1.0, b, t), SiteSubset{1, 3}, 4);
    const std::array<std::pair<std::complex<double>, long double>, 5> pairs = {
        {{rho(0, 0), r.u}, {rho(1, 1), r.w}, {rho(2, 2), r.w}, {rho(1, 2), r.y}, {rho(3, 3), r.v}}};
    for (const auto& [num, closed] : pairs)
      worst = std::max(worst, static_cast<double>(std::abs(num.real() * r.z - closed) / r.z));
    // the X-state zeros
    for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}})
      worst = std::max(worst, std::abs(rho(i, j)));
  }
  return {worst <= 1e-10, "max |entry*Z - closed|/Z = " + fmt(worst)};
}

Outcome criterion_4() {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> u(-2, 2), ut(0.05, 5);
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    const double j = u(rng), b = u(rng), t = ut(rng);
    worst = std::max(worst, std::abs(c_pair(j, b, t, 1, 3) - ring4_c13(j, b, t)));
  }
  return {worst <= 1e-9, "max |dC| = " + fmt(worst)};
}

Outcome criterion_5() {
  bool ok = true;
  std::string detail;
  for (double b : {0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.5}) {
    const double c = c_pair(1.0, b, 0.001, 1, 3);
    const bool plateau = b > 0.45 && b < 0.95;
    ok = ok && (plateau ? std::abs(c - 0.5) <= 1e-3 : c < 1e-3);
    detail += "B=" + fmt(b) + ":" + fmt(c) + " ";
  }
  return {ok, detail};
}

Outcome criterion_6() {
  // edges where C_13 passes half the plateau on a 0.001 grid, linear interpolation
  std::vector<double> edges;
  double prev_b = 0, prev = c_pair(1.0, 0.0, 0.01, 1, 3) - 0.25;
  for (int k = 1; k <= 1500; ++k) {
    const double b = 0.001 * k;
    const double cur = c_pair(1.0, b, 0.01, 1, 3) - 0.25;
    if ((prev > 0) != (cur > 0)) edges.push_back(prev_b + (b - prev_b) * prev / (prev - cur));
    prev_b = b;
    prev = cur;
  }
  const bool ok = edges.size() == 2 && std::abs(edges[0] - (kSqrt2 - 1)) <= 0.01 && std::abs(edges[1] - 1.0) <= 0.01;
  std::string detail = "edges:";
  for (double e : edges) detail += " " + fmt(e);
  return {ok, detail};
}

Outcome criterion_7() {
  const double plateau = c_pair(1.0, 0.2, 0.01, 1, 2);
  double dip = 1, dip_b = 0;
  for (int k = 0; k <= 200; ++k) {
    const double b = 0.30 + 0.001 * k;
    const double c = c_pair(1.0, b, 0.01, 1, 2);
    if (c < dip) {
      dip = c;
      dip_b = b;
    }
  }
  const double upper = c_pair(1.0, 0.7, 0.01, 1, 2);
  const bool interior = dip_b > 0.30 && dip_b < 0.50;
  const bool ok = std::abs(plateau - (2 * kSqrt2 - 1) / 4) <= 5e-3 && interior && dip < plateau && dip < upper;
  return {ok, "C12(0.2)=" + fmt(plateau) + " dip " + fmt(dip) + " at B=" + fmt(dip_b) + " C12(0.7)=" + fmt(upper)};
}

Outcome criterion_8() {
  const auto low = ground_state_projector(solve(1.0, 0.2));
  const auto mid = ground_state_projector(solve(1.0, 0.7));
  double worst = 0;
  for (int i = 1; i <= 4; ++i) {
    worst = std::max(worst, std::abs(i_concurrence(low, i, 4) - 1.0));
    worst = std::max(worst, std::abs(i_concurrence(mid, i, 4) - std::sqrt(3.0) / 2));
  }
  double sum_mid = 0, sum_low = 0;
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      sum_mid += std::pow(pair_concurrence(mid, i, j, 4), 2);
      sum_low += std::pow(pair_concurrence(low, i, j, 4), 2);
    }
  worst = std::max(worst, std::abs(global_entanglement(mid, 4) - 0.5 * sum_mid));
  worst = std::max(worst, std::abs((1 - sum_low) - (4 * kSqrt2 - 5) / 4));
  return {worst <= 1e-9, "max deviation = " + fmt(worst)};
}

std::size_t tc_roots(double b) {
  const auto p = shell("tc --j 1 --b " + fmt(b) + " --delta 0 --t-min 0.01 --t-max 5");
  if (p.code != 0) return 999;
  return static_cast<std::size_t>(std::count(p.out.begin(), p.out.end(), '\n')) - 1;
}

Outcome criterion_9() {
  const std::size_t r005 = tc_roots(0.05), r025 = tc_roots(0.25), r07 = tc_roots(0.7), r12 = tc_roots(1.2);
  double threshold = -1;
  for (int k = 1; k <= 60; ++k)
    if (tc_roots(0.005 * k) > 0) {
      threshold = 0.005 * k;
      break;
    }
  const bool ok = r005 == 0 && r025 == 2 && r07 == 1 && r12 == 2 && std::abs(threshold - 0.09) <= 0.02;
  std::ostringstream detail;
  detail << "roots B=0.05:" << r005 << " B=0.25:" << r025 << " B=0.7:" << r07 << " B=1.2:" << r12
         << "; lowest B with a boundary on a 0.005 grid: " << fmt(threshold);
  return {ok, detail.str()};
}

Outcome criterion_10() {
  const auto bs = Axis::linspace(-2, 2, 121).values;
  const auto ts = Axis::linspace(0.02, 2, 100).values;
  double parity = 0, sign = 0;
  for (double b : bs) {
    const auto plus = solve(1.0, b), mirror = solve(1.0, -b), flipped = solve(-1.0, b);
    for (double t : ts) {
      const Temperature temp(t);
      const double c = pair_concurrence(gibbs_state(plus, temp), 1, 3, 4);
      parity = std::max(parity, std::abs(c - pair_concurrence(gibbs_state(mirror, temp), 1, 3, 4)));
      sign = std::max(sign, std::abs(c - pair_concurrence(gibbs_state(flipped, temp), 1, 3, 4)));
    }
  }
  return {parity <= 1e-10 && sign <= 1e-10, "max |C(B)-C(-B)| = " + fmt(parity) + ", max |C(J)-C(-J)| = " + fmt(sign)};
}

double peak_delta(double b) {
  double best = -1, at = 0;
  for (int k = 0; k <= 200; ++k) {
    const double d = -1.0 + 0.01 * k;
    const double c = c_pair(1.0, b, 0.2, 1, 3, d);
    if (c > best) {
      best = c;
      at = d;
    }
  }
  return at;
}

Outcome criterion_11() {
  const double p0 = peak_delta(0.0), p5 = peak_delta(0.5);
  double positive = 0;
  for (int k = 0; k <= 100; ++k) positive = std::max(positive, c_pair(1.0, 0.0, 0.2, 1, 3, 0.01 * k));
  const bool ok = std::abs(p0 + 0.5) <= 0.02 && positive <= 1e-9 && p5 > p0;
  return {ok, "peak Delta at B=0: " + fmt(p0) + ", at B=0.5: " + fmt(p5) + ", max C for Delta>=0: " + fmt(positive)};
}

Outcome criterion_12() {
  const auto v = shell("validate");
  const auto dir = g_scratch / "figures";
  fs::remove_all(dir);
  const auto start = std::chrono::steady_clock::now();
  const auto f = shell("figure --all -o '" + dir.string() + "'");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::size_t files = 0;
  if (fs::exists(dir))
    for (const auto& e : fs::recursive_directory_iterator(dir)) files += e.is_regular_file();
  const bool ok = v.code == 0 && f.code == 0 && secs < 10.0 && files >= 7;
  std::string failed;
  std::istringstream lines(v.out);
  for (std::string line; std::getline(lines, line);)
    if (line.rfind("FAIL", 0) == 0) failed += " [" + line.substr(6, line.find("  (") - 6) + "]";
  return {ok, "validate exit " + std::to_string(v.code) + (failed.empty() ? "" : " failing:" + failed) +
                  "; figure --all exit " + std::to_string(f.code) + ", " + std::to_string(files) + " files in " +
                  fmt(secs) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <xxring-cli> <scratch-dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_scratch = argv[2];
  fs::create_directories(g_scratch);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"spectrum vs closed form", criterion_1},
      {"partition function", criterion_2},
      {"reduced state rho13", criterion_3},
      {"concurrence oracle", criterion_4},
      {"zero-temperature step", criterion_5},
      {"band edges at T=0.01", criterion_6},
      {"nearest-neighbour plateau and dip", criterion_7},
      {"ground-manifold identities", criterion_8},
      {"critical-temperature structure", criterion_9},
      {"field and coupling symmetries", criterion_10},
      {"anisotropy peak", criterion_11},
      {"validate command and figure presets", criterion_12},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << "  criterion " << k + 1 << ": " << criteria[k].first << "  ("
              << o.detail << ")\n";
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
