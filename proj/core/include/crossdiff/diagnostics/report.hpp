#pragma once

/// @file report.hpp
/// @brief Full diagnostic pass over a refinement ladder and its CSV outputs.

#include "crossdiff/diagnostics/basic.hpp"
#include "crossdiff/diagnostics/measures.hpp"
#include "crossdiff/diagnostics/residuals.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace crossdiff::diagnostics {

struct DiagnosticsConfig {
  /// Entropy indices; empty selects default_entropy_indices.
  std::vector<double> s_list;
  std::size_t window_t = 4;
  /// Cells per window on the coarsest rung.
  std::size_t window_x = 8;
  /// nullopt selects default_xi_threshold on the finest rung.
  std::optional<double> xi_threshold;
  int test_modes = 4;
};

struct RungReport {
  double epsilon = 0.0;
  std::size_t n_cells = 0;
  BasicChecks basic;
  double max_rho = 0.0;
  double clamp = 0.0;
  double clipped_mass = 0.0;
  DissipationBalance dissipation;
  double r0 = 0.0;
  double r1 = 0.0;
  std::vector<FamilyResidual> family;
  WeakResidual weak;
  std::vector<CellMeasure> measures;
  /// Per cell, one entry per s; nullopt when masked.
  std::vector<std::optional<std::vector<double>>> first_hit;
  std::vector<std::optional<std::vector<double>>> covariance;
  CollapseSummary collapse;
  /// Medians over the cells where the residual is defined.
  std::vector<double> median_first_hit;
  std::vector<double> median_covariance;
  FluxGap flux_gap;
};

struct Check {
  std::string name;
  /// Rung index, or nullopt for a cross-rung trend.
  std::optional<std::size_t> rung;
  double value = 0.0;
  bool pass = false;
  /// Hard checks decide the exit status; trends are reported only.
  bool hard = false;
};

struct AdmissibilityReport {
  std::vector<double> s_values;
  double xi_threshold = 0.0;
  std::vector<RungReport> rungs;
  std::vector<double> rho_cauchy;
  std::vector<Check> checks;

  [[nodiscard]] bool hard_pass() const;
  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] const Check* find(const std::string& name,
                                  std::optional<std::size_t> rung = std::nullopt) const;
};

[[nodiscard]] AdmissibilityReport build_report(const RefinementLadder& ladder,
                                               const Parameters& params,
                                               const DiagnosticsConfig& config);

/// rung,check,value,pass (rung is "all" for trends).
void write_admissibility_csv(std::ostream& out, const AdmissibilityReport& report);
/// rung,quantity,s,norm (s empty where it does not apply).
void write_residuals_csv(std::ostream& out, const AdmissibilityReport& report);
/// rung,cell_t,cell_x,n_samples,mean_a,var_a,mean_xi,A_hat,firsthit_<s>...,cov_<s>...
void write_measures_csv(std::ostream& out, const AdmissibilityReport& report);

}  // namespace crossdiff::diagnostics
