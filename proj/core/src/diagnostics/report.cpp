#include "crossdiff/diagnostics/report.hpp"

#include "crossdiff/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace crossdiff::diagnostics {

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double median_of(std::vector<double> v) {
  if (v.empty()) {
    return 0.0;
  }
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::vector<double> column_medians(const std::vector<std::optional<std::vector<double>>>& rows,
                                   std::size_t n_cols) {
  std::vector<double> out(n_cols, 0.0);
  for (std::size_t c = 0; c < n_cols; ++c) {
    std::vector<double> col;
    for (const auto& r : rows) {
      if (r) {
        col.push_back((*r)[c]);
      }
    }
    out[c] = median_of(std::move(col));
  }
  return out;
}

// Largest ratio next/previous along a series; < 1 means strictly decreasing.
double worst_ratio(const std::vector<double>& series) {
  double worst = 0.0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    const double prev = series[k - 1];
    const double ratio = prev > 0.0 ? series[k] / prev : (series[k] > 0.0 ? INFINITY : 0.0);
    worst = std::max(worst, ratio);
  }
  return worst;
}

template <class F>
std::vector<double> per_rung(const std::vector<RungReport>& rungs, F f) {
  std::vector<double> out;
  out.reserve(rungs.size());
  for (const RungReport& r : rungs) {
    out.push_back(f(r));
  }
  return out;
}

}  // namespace

bool AdmissibilityReport::hard_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return !c.hard || c.pass; });
}

bool AdmissibilityReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* AdmissibilityReport::find(const std::string& name,
                                       std::optional<std::size_t> rung) const {
  for (const Check& c : checks) {
    if (c.name == name && c.rung == rung) {
      return &c;
    }
  }
  return nullptr;
}

AdmissibilityReport build_report(const RefinementLadder& ladder, const Parameters& params,
                                 const DiagnosticsConfig& config) {
  if (params.equal_mobility()) {
    throw ConfigError("ladder diagnostics need nu != 1");
  }
  if (ladder.rungs.size() < 3) {
    throw ConfigError("ladder diagnostics need at least 3 rungs");
  }
  AdmissibilityReport report;

  std::vector<EntropyIndex> indices;
  if (config.s_list.empty()) {
    indices = default_entropy_indices(params);
  } else {
    for (double s : config.s_list) {
      indices.emplace_back(s, params);
    }
  }
  std::vector<EntropyTable> tables;
  tables.reserve(indices.size());
  for (const EntropyIndex& s : indices) {
    tables.emplace_back(s, params);
    report.s_values.push_back(s.value());
  }

  report.xi_threshold = config.xi_threshold
                            ? *config.xi_threshold
                            : default_xi_threshold(ladder.rungs.back().trajectory, params);

  const auto measures = ladder_cell_measures(ladder, config.window_t, config.window_x, params);
  const auto gaps = flux_identification_gap(ladder, params, config.window_t, config.window_x);
  report.rho_cauchy = rho_cauchy_l2(ladder);

  for (std::size_t k = 0; k < ladder.rungs.size(); ++k) {
    const Rung& rung = ladder.rungs[k];
    const Trajectory& traj = rung.trajectory;
    RungReport r;
    r.epsilon = rung.epsilon;
    r.n_cells = rung.n_cells;
    r.basic = check_basic(traj, params);
    for (const StepRecord& rec : traj.step_log) {
      r.max_rho = std::max(r.max_rho, rec.max_rho);
    }
    r.clamp = traj.max_clamp;
    r.clipped_mass = traj.clipped_mass;
    r.dissipation = entropy_dissipation_balance(traj, params);
    const AffineResiduals affine = affine_residual_norms(traj, params);
    r.r0 = affine.r0_norm;
    r.r1 = affine.r1_norm;
    r.family = family_residual_norms(traj, params, std::span<const EntropyTable>(tables));
    r.weak = weak_solution_residual(traj, params, config.test_modes);
    r.measures = measures[k];
    for (const CellMeasure& c : r.measures) {
      r.first_hit.push_back(first_hit_residual(c, tables));
      r.covariance.push_back(covariance_identity_residual(c, tables, params, report.xi_threshold));
    }
    r.collapse = collapse_summary(r.measures, report.xi_threshold);
    r.median_first_hit = column_medians(r.first_hit, tables.size());
    r.median_covariance = column_medians(r.covariance, tables.size());
    r.flux_gap = gaps[k];
    report.rungs.push_back(std::move(r));
  }

  auto& checks = report.checks;
  for (std::size_t k = 0; k < report.rungs.size(); ++k) {
    const RungReport& r = report.rungs[k];
    const double slack = 1e-8 * (1.0 + std::abs(r.basic.initial_entropy));
    const double constant_mode = std::max(r.weak.m_constant_mode, r.weak.n_constant_mode);
    bool finite = std::isfinite(r.r0) && std::isfinite(r.r1) && std::isfinite(r.weak.m) &&
                  std::isfinite(r.weak.n);
    for (const FamilyResidual& f : r.family) {
      finite = finite && std::isfinite(f.l1);
    }
    checks.push_back({"mass_drift", k, r.basic.mass_drift, r.basic.mass_drift < 1e-12, true});
    checks.push_back(
        {"max_rho_growth", k, r.basic.max_rho_growth, r.basic.max_rho_growth < 1e-3, true});
    checks.push_back({"activity_clamp", k, r.clamp, r.clamp < 1e-12, true});
    checks.push_back({"clipped_mass", k, r.clipped_mass, r.clipped_mass < 1e-10, true});
    checks.push_back({"entropy_step_increase", k, r.basic.entropy_increase,
                      r.basic.entropy_increase <= slack, true});
    checks.push_back({"weak_constant_mode", k, constant_mode, constant_mode < 1e-12, true});
    checks.push_back({"norms_finite", k, finite ? 1.0 : 0.0, finite, true});
  }

  const auto& rungs = report.rungs;
  const auto strict = [&](const std::string& name, const std::vector<double>& series) {
    const double w = worst_ratio(series);
    checks.push_back({name, std::nullopt, w, w < 1.0, false});
  };
  const auto weak_order = [&](const std::string& name, const std::vector<double>& series) {
    const double w = worst_ratio(series);
    checks.push_back({name, std::nullopt, w, w <= 1.0, false});
  };
  strict("r0_decreasing", per_rung(rungs, [](const RungReport& r) { return r.r0; }));
  strict("r1_decreasing", per_rung(rungs, [](const RungReport& r) { return r.r1; }));
  for (std::size_t j = 0; j < tables.size(); ++j) {
    const auto series = per_rung(rungs, [j](const RungReport& r) { return r.family[j].l1; });
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    const double band = *lo > 0.0 ? *hi / *lo : (*hi > 0.0 ? INFINITY : 1.0);
    checks.push_back({"family_band_s" + short_number(report.s_values[j]), std::nullopt, band,
                      band <= 2.0, false});
    strict("family_source_gap_decreasing_s" + short_number(report.s_values[j]),
           per_rung(rungs, [j](const RungReport& r) { return r.family[j].source_gap_l1; }));
  }
  strict("rho_cauchy_decreasing", report.rho_cauchy);
  strict("dissipation_defect_decreasing",
         per_rung(rungs, [](const RungReport& r) { return r.dissipation.corrected; }));
  strict("weak_m_decreasing", per_rung(rungs, [](const RungReport& r) { return r.weak.m; }));
  strict("weak_n_decreasing", per_rung(rungs, [](const RungReport& r) { return r.weak.n; }));
  weak_order("collapse_median_nonincreasing",
             per_rung(rungs, [](const RungReport& r) { return r.collapse.median_var_a; }));
  for (std::size_t j = 0; j < tables.size(); ++j) {
    strict("first_hit_median_decreasing_s" + short_number(report.s_values[j]),
           per_rung(rungs, [j](const RungReport& r) { return r.median_first_hit[j]; }));
    strict("covariance_median_decreasing_s" + short_number(report.s_values[j]),
           per_rung(rungs, [j](const RungReport& r) { return r.median_covariance[j]; }));
  }
  weak_order("activity_flux_gap_nonincreasing",
             per_rung(rungs, [](const RungReport& r) { return r.flux_gap.activity_flux; }));
  return report;
}

void write_admissibility_csv(std::ostream& out, const AdmissibilityReport& report) {
  out << "rung,check,value,pass\n";
  for (const Check& c : report.checks) {
    out << (c.rung ? std::to_string(*c.rung) : std::string("all")) << ',' << c.name << ','
        << io::format_double(c.value) << ',' << (c.pass ? 1 : 0) << '\n';
  }
}

void write_residuals_csv(std::ostream& out, const AdmissibilityReport& report) {
  out << "rung,quantity,s,norm\n";
  const auto row = [&](std::size_t k, const char* name, const std::string& s, double v) {
    out << k << ',' << name << ',' << s << ',' << io::format_double(v) << '\n';
  };
  for (std::size_t k = 0; k < report.rungs.size(); ++k) {
    const RungReport& r = report.rungs[k];
    row(k, "r0_Hminus1", "", r.r0);
    row(k, "r1_Hminus1", "", r.r1);
    for (const FamilyResidual& f : r.family) {
      const std::string s = io::format_double(f.s);
      row(k, "r_s_L1", s, f.l1);
      row(k, "r_s_source_L1", s, f.source_l1);
      row(k, "r_s_source_gap_L1", s, f.source_gap_l1);
    }
    row(k, "weak_m", "", r.weak.m);
    row(k, "weak_n", "", r.weak.n);
    row(k, "dissipation_raw", "", r.dissipation.raw);
    row(k, "dissipation_corrected", "", r.dissipation.corrected);
    if (k < report.rho_cauchy.size()) {
      row(k, "rho_cauchy_L2", "", report.rho_cauchy[k]);
    }
    row(k, "collapse_median_var_a", "", r.collapse.median_var_a);
    row(k, "collapse_p90_var_a", "", r.collapse.p90_var_a);
    row(k, "flux_decomposition", "", r.flux_gap.decomposition);
    row(k, "flux_gap_m", "", r.flux_gap.m_flux);
    row(k, "flux_gap_arho", "", r.flux_gap.activity_flux);
  }
}

void write_measures_csv(std::ostream& out, const AdmissibilityReport& report) {
  out << "rung,cell_t,cell_x,n_samples,mean_a,var_a,mean_xi,A_hat";
  for (double s : report.s_values) {
    out << ",firsthit_" << short_number(s);
  }
  for (double s : report.s_values) {
    out << ",cov_" << short_number(s);
  }
  out << '\n';
  const auto optional_columns = [&](const std::optional<std::vector<double>>& v) {
    for (std::size_t j = 0; j < report.s_values.size(); ++j) {
      out << ',';
      if (v) {
        out << io::format_double((*v)[j]);
      }
    }
  };
  for (std::size_t k = 0; k < report.rungs.size(); ++k) {
    const RungReport& r = report.rungs[k];
    for (std::size_t c = 0; c < r.measures.size(); ++c) {
      const CellMeasure& m = r.measures[c];
      out << k << ',' << m.cell_t << ',' << m.cell_x << ',' << m.samples.size() << ','
          << io::format_double(m.mean_a) << ',' << io::format_double(m.var_a) << ','
          << io::format_double(m.mean_xi) << ',';
      if (m.a_hat) {
        out << io::format_double(*m.a_hat);
      }
      optional_columns(r.first_hit[c]);
      optional_columns(r.covariance[c]);
      out << '\n';
    }
  }
}

}  // namespace crossdiff::diagnostics
