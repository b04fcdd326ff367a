// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "harness/commands.hpp"
#include "harness/config.hpp"

#include "crossdiff/diagnostics/balance.hpp"
#include "crossdiff/diagnostics/basic.hpp"
#include "crossdiff/diagnostics/measures.hpp"
#include "crossdiff/diagnostics/report.hpp"
#include "crossdiff/entropy_family.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace crossdiff;
using namespace crossdiff::diagnostics;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
    }
    if (!detail.empty()) {
      detail += "; ";
    }
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

const Parameters kNu2 = Parameters::make(2.0);

double phi15(double a) {
  return 2.0 * std::sqrt(a - 1.0) - (2.0 / 3.0) * std::pow(a - 1.0, 1.5);
}

// Trend and per-rung checks named `prefix*` all pass.
bool checks_pass(const AdmissibilityReport& report, const std::string& prefix, double* worst,
                 std::size_t* count) {
  bool ok = true;
  *count = 0;
  *worst = 0.0;
  for (const Check& c : report.checks) {
    if (c.name.rfind(prefix, 0) == 0) {
      ok = ok && c.pass;
      *worst = std::max(*worst, c.value);
      ++*count;
    }
  }
  return ok && *count > 0;
}

void expect_checks(Outcome& out, const AdmissibilityReport& report, const std::string& prefix,
                   const char* value_format) {
  double worst = 0.0;
  std::size_t count = 0;
  const bool ok = checks_pass(report, prefix, &worst, &count);
  out.require(ok, prefix + " x" + std::to_string(count) + " worst " + fmt(value_format, worst));
}

Outcome criterion1() {
  Outcome out;
  const EntropyIndex s(1.5, kNu2);
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> ua(1.0, 2.0);
  double err = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double a = ua(rng);
    err = std::max(err, std::abs(phi(s, a, kNu2) - phi15(a)));
  }
  out.require(err < 1e-10, "phi_1.5 max error " + fmt("%.2e", err));
  const double ode = verify_ode_residual(s, kNu2, 100);
  out.require(ode < 1e-12, "ODE residual " + fmt("%.2e", ode));
  double worst_order = INFINITY;
  for (double sv : {0.8, 1.5, 1.75}) {
    const EntropyIndex t(sv, kNu2);
    const auto coarse = verify_m_identities(t, kNu2, 20, 2e-2);
    const auto fine = verify_m_identities(t, kNu2, 20, 1e-2);
    worst_order = std::min({worst_order, std::log2(coarse.derivative / fine.derivative),
                            std::log2(coarse.quotient / fine.quotient)});
  }
  out.require(worst_order > 1.8, "M identities order " + fmt("%.3f", worst_order));
  return out;
}

Outcome criterion2() {
  Outcome out;
  std::vector<EntropyIndex> idx = default_entropy_indices(kNu2);
  idx.emplace_back(1.0, kNu2);
  double worst_order = INFINITY;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto fields = random_trigonometric_fields(kNu2, seed);
    for (const EntropyIndex& s : idx) {
      const double coarse = balance_identity_oracle(s, kNu2, fields, 1e-2);
      const double fine = balance_identity_oracle(s, kNu2, fields, 5e-3);
      worst_order = std::min(worst_order, std::log2(coarse / fine));
    }
  }
  out.require(worst_order > 1.8, "balance defect order " + fmt("%.3f", worst_order) +
                                     " over " + std::to_string(idx.size()) + " indices x 3 fields");
  return out;
}

Outcome criterion6(const AdmissibilityReport& report) {
  Outcome out;
  expect_checks(out, report, "rho_cauchy_decreasing", "%.3f");

  const Parameters equal = Parameters::make(1.0);
  SchemeConfig base;
  base.scenario = "mixed_oscillatory";
  base.n_cells = 64;
  base.epsilon = 4e-3;
  base.t_final = 0.25;
  base.output_times = uniform_output_times(base.t_final, 40);
  const RefinementLadder ladder = refine_sequence(base, equal, 3, true);
  SchemeConfig ref = base;
  ref.n_cells = 4 * ladder.rungs.back().n_cells;
  ref.epsilon = ladder.rungs.back().epsilon / 4.0;
  const Trajectory reference = run(ref, equal);
  const ConvergenceOrder order = observed_order(ladder, reference);
  out.require(order.orders.back() >= 0.8,
              "nu=1 order " + fmt("%.3f", order.orders.back()) + " (finest error " +
                  fmt("%.2e", order.errors.back()) + ")");
  return out;
}

Trajectory independent_random_trajectory(std::size_t n_cells, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(kNu2.alpha, kNu2.beta);
  std::uniform_real_distribution<double> urho(0.5, 1.5);
  Trajectory t;
  t.params = kNu2;
  t.config.n_cells = n_cells;
  for (int k = 0; k < 8; ++k) {
    std::vector<double> rho(n_cells);
    std::vector<double> a(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
      rho[i] = urho(rng);
      a[i] = ua(rng);
    }
    t.snapshots.push_back(from_rho_a(rho, a, kNu2, 0.01 * k));
  }
  return t;
}

Outcome criterion7(const AdmissibilityReport& report) {
  Outcome out;
  std::vector<EntropyTable> tables;
  for (double s : report.s_values) {
    tables.emplace_back(EntropyIndex(s, kNu2), kNu2);
  }
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.3, 1.0);
  double dirac_max = 0.0;
  for (double a : {1.0, 1.2, 1.5, 1.8, 2.0}) {
    std::vector<std::pair<double, double>> samples;
    for (int k = 0; k < 64; ++k) {
      samples.emplace_back(a, g(rng));
    }
    const CellMeasure cell = make_cell_measure(samples);
    const auto first_hit = first_hit_residual(cell, tables);
    for (double v : first_hit.value()) {
      dirac_max = std::max(dirac_max, std::abs(v));
    }
    const auto covariance = covariance_identity_residual(cell, tables, kNu2, 0.0);
    for (double v : covariance.value()) {
      dirac_max = std::max(dirac_max, std::abs(v));
    }
  }
  out.require(dirac_max == 0.0, "Dirac residuals " + fmt("%g", dirac_max));

  std::vector<double> control;
  for (std::size_t k = 0; k < 3; ++k) {
    const Trajectory t = independent_random_trajectory(128u << k, 500 + k);
    const auto cells = estimate_cell_measures(t, 4, 8, kNu2);
    control.push_back(collapse_summary(cells, default_xi_threshold(t, kNu2)).median_var_a);
  }
  const double floor_ratio =
      std::min(control[1], control[2]) / control[0];
  out.require(floor_ratio > 0.5, "negative control min ratio " + fmt("%.3f", floor_ratio));
  expect_checks(out, report, "collapse_median_nonincreasing", "%.3f");
  return out;
}

Outcome criterion8() {
  Outcome out;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> us(1.0, 2.0);
  std::uniform_real_distribution<double> ua(1.0, 2.0);
  double smallest = INFINITY;
  int positive = 0;
  int drawn = 0;
  while (drawn < 100) {
    const double s = us(rng);
    double r = ua(rng);
    double q = ua(rng);
    if (s == 1.0 || r == q || r == 1.0 || q == 1.0) {
      continue;
    }
    if (q < r) {
      std::swap(r, q);
    }
    ++drawn;
    const double m = two_point_margin(EntropyIndex(s, kNu2), r, q, kNu2);
    positive += m > 0.0 ? 1 : 0;
    smallest = std::min(smallest, m);
  }
  out.require(positive == 100, std::to_string(positive) + "/100 positive, smallest margin " +
                                   fmt("%.3e", smallest));
  return out;
}

Outcome criterion10() {
  Outcome out;
  const auto path = std::filesystem::temp_directory_path() / "crossdiff_acceptance_phi.csv";
  const std::vector<double> s_list = {0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.5};
  std::ostringstream err;
  const int code = harness::cli_phi_table(2.0, s_list, 201, path, err);
  out.require(code == 0, "exit code " + std::to_string(code));
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  out.require(line == "a,s,phi", "header");
  std::map<double, std::vector<std::pair<double, double>>> curves;
  while (std::getline(in, line)) {
    double a = 0.0;
    double s = 0.0;
    double v = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &s, &v) == 3) {
      curves[s].emplace_back(a, v);
    }
  }
  bool start_zero = true;
  bool increasing = true;
  for (const auto& [s, curve] : curves) {
    start_zero = start_zero && curve.front().first == 1.0 && curve.front().second == 0.0;
    for (std::size_t k = 1; k < curve.size(); ++k) {
      increasing = increasing && curve[k].second > curve[k - 1].second;
    }
  }
  bool identity = true;
  for (const auto& [a, v] : curves[1.0]) {
    identity = identity && v == a - 1.0;
  }
  const double spot = curves[1.5].back().second;
  out.require(curves.size() == s_list.size(), std::to_string(curves.size()) + " curves");
  out.require(start_zero, "phi_s(1) = 0");
  out.require(increasing, "monotone increasing");
  out.require(identity, "phi_1 = a - 1 exactly");
  out.require(std::abs(spot - 4.0 / 3.0) <= 1e-10,
              "phi_1.5(2) - 4/3 = " + fmt("%.2e", spot - 4.0 / 3.0));
  std::ostringstream err2;
  out.require(harness::cli_phi_table(2.0, {2.5}, 11, path, err2) == 1, "s = 2.5 rejected");
  std::filesystem::remove(path);
  return out;
}

}  // namespace

int main() {
  const harness::RunConfig config;  // default desk-scale study
  const Parameters params = config.parameters();
  const RefinementLadder ladder =
      refine_sequence(config.ladder_scheme(), params, config.ladder_rungs, true);
  const AdmissibilityReport report = build_report(ladder, params, config.diagnostics());

  std::vector<std::pair<int, Outcome>> results;
  results.emplace_back(1, criterion1());
  results.emplace_back(2, criterion2());
  {
    Outcome out;
    for (const char* name : {"mass_drift", "max_rho_growth", "activity_clamp", "clipped_mass"}) {
      expect_checks(out, report, name, "%.2e");
    }
    results.emplace_back(3, out);
  }
  {
    Outcome out;
    expect_checks(out, report, "entropy_step_increase", "%.2e");
    expect_checks(out, report, "dissipation_defect_decreasing", "%.3f");
    results.emplace_back(4, out);
  }
  {
    Outcome out;
    expect_checks(out, report, "r0_decreasing", "%.3f");
    expect_checks(out, report, "r1_decreasing", "%.3f");
    expect_checks(out, report, "family_band_s", "%.3f");
    results.emplace_back(5, out);
  }
  results.emplace_back(6, criterion6(report));
  results.emplace_back(7, criterion7(report));
  results.emplace_back(8, criterion8());
  {
    Outcome out;
    expect_checks(out, report, "weak_m_decreasing", "%.3f");
    expect_checks(out, report, "weak_n_decreasing", "%.3f");
    expect_checks(out, report, "weak_constant_mode", "%.2e");
    results.emplace_back(9, out);
  }
  results.emplace_back(10, criterion10());

  bool all = true;
  for (const auto& [id, outcome] : results) {
    std::printf("criterion %2d %s  %s\n", id, outcome.pass ? "PASS" : "FAIL",
                outcome.detail.c_str());
    all = all && outcome.pass;
  }
  return all ? 0 : 1;
}
