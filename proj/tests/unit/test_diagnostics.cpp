#include "crossdiff/diagnostics/balance.hpp"
#include "crossdiff/diagnostics/basic.hpp"
#include "crossdiff/diagnostics/measures.hpp"
#include "crossdiff/diagnostics/report.hpp"
#include "crossdiff/diagnostics/residuals.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace crossdiff;
using namespace crossdiff::diagnostics;

namespace {

const Parameters kNu2 = Parameters::make(2.0);
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Trajectory constant_run() {
  SchemeConfig c;
  c.scenario = "constant";
  c.scenario_params = {{"c_m", 0.6}, {"c_n", 0.9}};
  c.n_cells = 32;
  c.epsilon = 1e-3;
  c.t_final = 0.02;
  c.output_times = uniform_output_times(0.02, 8);
  return run(c, kNu2);
}

RefinementLadder small_ladder() {
  SchemeConfig c;
  c.n_cells = 32;
  c.epsilon = 4e-3;
  c.t_final = 0.05;
  c.output_times = uniform_output_times(0.05, 8);
  return refine_sequence(c, kNu2, 3);
}

// Sum over modes of |r_hat_k|^2 / (1 + (2 pi k)^2), with r_hat_k = h sum r_j e^{-2 pi i k x_j}.
double direct_hminus1_squared(const std::vector<double>& r) {
  const std::size_t n = r.size();
  const double h = 1.0 / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double kappa = k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - n;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = (static_cast<double>(j) + 0.5) * h;
      re += h * r[j] * std::cos(kTwoPi * kappa * x);
      im -= h * r[j] * std::sin(kTwoPi * kappa * x);
    }
    total += (re * re + im * im) / (1.0 + kTwoPi * kTwoPi * kappa * kappa);
  }
  return total;
}

}  // namespace

TEST(HMinus1, SineModes) {
  for (int k : {1, 3, 7}) {
    std::vector<double> r(64);
    for (std::size_t j = 0; j < r.size(); ++j) {
      r[j] = std::sin(kTwoPi * k * (j + 0.5) / 64.0);
    }
    EXPECT_NEAR(hminus1_norm_squared(r), 0.5 / (1.0 + kTwoPi * kTwoPi * k * k), 1e-15);
  }
}

TEST(HMinus1, MatchesDirectSum) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (std::size_t n : {16u, 50u, 128u}) {
    std::vector<double> r(n);
    for (double& v : r) {
      v = g(rng);
    }
    const double direct = direct_hminus1_squared(r);
    EXPECT_NEAR(hminus1_norm_squared(r), direct, 1e-12 * direct);
  }
}

TEST(HMinus1, SpaceTimeCalibration) {
  // A constant source c over duration T has norm |c| sqrt(T).
  const std::vector<std::vector<double>> res(4, std::vector<double>(32, 0.7));
  const std::vector<double> durations(4, 0.25);
  EXPECT_NEAR(space_time_hminus1(res, durations), 0.7, 1e-14);
  std::vector<std::vector<double>> bumped = res;
  for (double& v : bumped[2]) {
    v += 1.0;
  }
  EXPECT_NEAR(space_time_hminus1(bumped, durations),
              std::sqrt(3 * 0.25 * 0.49 + 0.25 * 1.7 * 1.7), 1e-14);
}

TEST(Residuals, ConstantRunVanishes) {
  const Trajectory t = constant_run();
  const auto affine = affine_residual_norms(t, kNu2);
  EXPECT_LT(affine.r0_norm, 1e-14);
  EXPECT_LT(affine.r1_norm, 1e-14);
  const std::vector<EntropyIndex> idx = {EntropyIndex(1.25, kNu2), EntropyIndex(1.5, kNu2)};
  for (const FamilyResidual& f : family_residual_norms(t, kNu2, idx)) {
    EXPECT_LT(f.l1, 1e-12);
  }
  const WeakResidual w = weak_solution_residual(t, kNu2, 3);
  EXPECT_LT(w.m, 1e-14);
  EXPECT_LT(w.n, 1e-14);
  EXPECT_EQ(w.n_tests, 2u * 7u);
  EXPECT_LT(entropy_dissipation_balance(t, kNu2).corrected, 1e-14);
  for (double v : segregation_overlap(t)) {
    EXPECT_NEAR(v, 0.54, 1e-14);
  }
}

TEST(Residuals, NeedSnapshots) {
  SchemeConfig c;
  c.n_cells = 16;
  c.t_final = 0.0;
  EXPECT_THROW((void)affine_residual_norms(run(c, kNu2), kNu2), DomainError);
}

TEST(BalanceOracle, SecondOrderDecay) {
  const auto fields = random_trigonometric_fields(kNu2, 42);
  const auto frozen = constant_activity_fields(kNu2, 1.4, 43);
  std::vector<EntropyIndex> idx = default_entropy_indices(kNu2);
  idx.emplace_back(1.0, kNu2);
  for (const EntropyIndex& s : idx) {
    for (const auto* f : {&fields, &frozen}) {
      const double coarse = balance_identity_oracle(s, kNu2, *f, 1e-2);
      const double fine = balance_identity_oracle(s, kNu2, *f, 5e-3);
      EXPECT_NEAR(coarse / fine, 4.0, 0.4) << "s = " << s.value();
    }
  }
}

TEST(Measures, ConstantActivityIsDirac) {
  const Trajectory t = constant_run();
  const auto cells = estimate_cell_measures(t, 4, 8, kNu2);
  EXPECT_EQ(cells.size(), 2u * 4u);
  for (const CellMeasure& c : cells) {
    EXPECT_EQ(c.var_a, 0.0);
    EXPECT_EQ(c.samples.size(), 32u);
  }
  EXPECT_THROW((void)estimate_cell_measures(t, 4, 6, kNu2), DomainError);
  EXPECT_THROW((void)estimate_cell_measures(t, 3, 8, kNu2), DomainError);
}

TEST(Measures, AlternatingActivityAndVacuum) {
  Trajectory t;
  t.params = kNu2;
  t.config.n_cells = 16;
  for (int k = 0; k < 4; ++k) {
    SpeciesState s;
    s.t = 0.1 * k;
    for (std::size_t i = 0; i < 16; ++i) {
      const bool vacuum = i == 9;
      s.m.push_back(vacuum ? 0.0 : (i % 2 == 0 ? 1.0 : 0.0));
      s.n.push_back(vacuum ? 0.0 : (i % 2 == 0 ? 0.0 : 1.0));
    }
    t.snapshots.push_back(s);
  }
  const auto cells = estimate_cell_measures(t, 4, 8, kNu2);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_NEAR(cells[0].var_a, 0.25, 1e-15);
  EXPECT_EQ(cells[0].samples.size(), 32u);
  EXPECT_EQ(cells[1].samples.size(), 28u);
  EXPECT_EQ(cells[1].n_vacuum, 4u);
}

TEST(Measures, DiracCellsGiveExactZeros) {
  std::vector<EntropyTable> tables;
  for (double s : {1.1, 1.5, 1.75}) {
    tables.emplace_back(EntropyIndex(s, kNu2), kNu2);
  }
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.5, 1.0);
  for (double a : {1.0, 1.3, 1.9, 2.0}) {
    std::vector<std::pair<double, double>> samples;
    for (int k = 0; k < 64; ++k) {
      samples.emplace_back(a, g(rng));
    }
    const CellMeasure cell = make_cell_measure(samples);
    EXPECT_EQ(cell.var_a, 0.0);
    const auto first_hit = first_hit_residual(cell, tables);
    for (double v : first_hit.value()) {
      EXPECT_EQ(v, 0.0);
    }
    const auto covariance = covariance_identity_residual(cell, tables, kNu2, 0.0);
    for (double v : covariance.value()) {
      EXPECT_EQ(v, 0.0);
    }
  }
}

TEST(Measures, IndependentSamplesStayInBand) {
  const std::vector<EntropyTable> tables = {EntropyTable(EntropyIndex(1.5, kNu2), kNu2)};
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ua(1.0, 2.0);
  std::normal_distribution<double> g;
  std::vector<std::pair<double, double>> samples;
  for (int k = 0; k < 4000; ++k) {
    samples.emplace_back(ua(rng), g(rng));
  }
  const CellMeasure cell = make_cell_measure(samples);
  EXPECT_NEAR(cell.band, 3.0 / std::sqrt(4000.0), 1e-15);
  EXPECT_LT(first_hit_residual(cell, tables).value()[0], cell.band);
  EXPECT_LT(std::abs(*cell.a_hat), 1.5 * cell.band * 3.0);
}

TEST(Measures, TwoPointCovarianceResidual) {
  const std::vector<EntropyTable> tables = {EntropyTable(EntropyIndex(1.5, kNu2), kNu2)};
  std::vector<std::pair<double, double>> samples;
  for (int k = 0; k < 10; ++k) {
    samples.emplace_back(1.25, 1.0);
    samples.emplace_back(1.75, 1.0);
  }
  const CellMeasure cell = make_cell_measure(samples);
  // nu * margin / 4 with margin = 0.0074724732459669287841.
  EXPECT_NEAR(covariance_identity_residual(cell, tables, kNu2, 0.0).value()[0],
              0.0037362366229834643920, 1e-9);
  EXPECT_FALSE(covariance_identity_residual(cell, tables, kNu2, 10.0).has_value());
  EXPECT_FALSE(first_hit_residual(make_cell_measure({{1.5, 1.0}}), tables).has_value());
}

TEST(Measures, TwoPointMargin) {
  EXPECT_NEAR(two_point_margin(EntropyIndex(1.5, kNu2), 1.25, 1.75, kNu2),
              0.0074724732459669287841, 1e-15);
  EXPECT_THROW((void)two_point_margin(EntropyIndex(1.5, kNu2), 1.75, 1.25, kNu2), DomainError);
}

TEST(Measures, SegregatedCellsCollapse) {
  std::vector<CellMeasure> cells;
  for (double a : {1.0, 2.0, 1.0}) {
    std::vector<std::pair<double, double>> samples;
    for (int k = 0; k < 32; ++k) {
      samples.emplace_back(a, 0.5 + 0.01 * k);
    }
    cells.push_back(make_cell_measure(samples));
  }
  const CollapseSummary s = collapse_summary(cells, 0.1);
  EXPECT_EQ(s.median_var_a, 0.0);
  EXPECT_EQ(s.n_unmasked, 3u);
  EXPECT_EQ(collapse_summary(cells, 10.0).n_masked, 3u);
}

TEST(Ladder, SmallLadderDiagnostics) {
  const RefinementLadder ladder = small_ladder();
  const auto cauchy = rho_cauchy_l2(ladder);
  ASSERT_EQ(cauchy.size(), 2u);
  EXPECT_LT(cauchy[1], cauchy[0]);
  for (const FluxGap& g : flux_identification_gap(ladder, kNu2, 4, 8)) {
    EXPECT_LT(g.decomposition, 1e-13);
  }
  DiagnosticsConfig cfg;
  cfg.s_list = {1.25, 1.5};
  const AdmissibilityReport report = build_report(ladder, kNu2, cfg);
  EXPECT_TRUE(report.hard_pass());
  EXPECT_NE(report.find("r0_decreasing"), nullptr);
  EXPECT_NE(report.find("mass_drift", 2), nullptr);
  EXPECT_THROW((void)build_report(ladder, Parameters::make(1.0), cfg), ConfigError);
}
