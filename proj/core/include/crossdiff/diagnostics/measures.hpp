#pragma once

/// @file measures.hpp
/// @brief Windowed empirical measures of (a, xi) and the collapse diagnostics
/// built on them.
///
/// A macro-cell is window_t consecutive snapshots by window_x consecutive
/// cells. Vacuum cells are excluded from the samples. Every covariance is
/// computed from deviations against the first sample, so a cell whose a-samples
/// all coincide yields exactly zero.

#include "crossdiff/entropy_family.hpp"
#include "crossdiff/solver.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace crossdiff::diagnostics {

struct CellMeasure {
  std::size_t cell_t = 0;
  std::size_t cell_x = 0;
  /// (a, xi) pairs.
  std::vector<std::pair<double, double>> samples;
  std::size_t n_vacuum = 0;
  double mean_a = 0.0;
  /// Population variance.
  double var_a = 0.0;
  double mean_xi = 0.0;
  double mean_abs_xi = 0.0;
  double std_xi = 0.0;
  /// Sample mean of a xi; set when there are at least kMinSamples samples.
  std::optional<double> a_hat;
  /// 3 / sqrt(N) sampling band, 0 when absent.
  double band = 0.0;

  static constexpr std::size_t kMinSamples = 20;

  [[nodiscard]] bool absent() const { return samples.empty(); }
};

/// Builds a CellMeasure from raw samples.
[[nodiscard]] CellMeasure make_cell_measure(std::vector<std::pair<double, double>> samples,
                                            std::size_t n_vacuum = 0);

/// Partitions the snapshots into windows of window_t (leading snapshots that do
/// not fill a window are dropped, so the last window ends at t_final) and the
/// cells into windows of window_x. Throws DomainError if either window is
/// smaller than 4, window_x does not divide n_cells, or there are fewer than
/// window_t snapshots.
[[nodiscard]] std::vector<CellMeasure> estimate_cell_measures(const Trajectory& traj,
                                                              std::size_t window_t,
                                                              std::size_t window_x,
                                                              const Parameters& params);

/// Measures for every rung with the same window counts, so spatial windows
/// shrink with the cell width while time windows stay aligned.
[[nodiscard]] std::vector<std::vector<CellMeasure>> ladder_cell_measures(
    const RefinementLadder& ladder, std::size_t window_t, std::size_t window_x,
    const Parameters& params);

/// |mean(a xi phi_s) - A_hat mean(phi_s)| / (rms(a xi) phi_s(beta)) for each table.
/// nullopt when A_hat is undefined.
[[nodiscard]] std::optional<std::vector<double>> first_hit_residual(
    const CellMeasure& cell, std::span<const EntropyTable> tables);

/// |Cov(a, M_s/a) + nu Cov(phi_s, 1/a)| over the a-marginal for each table.
/// nullopt unless A_hat is defined and |A_hat| > xi_threshold.
[[nodiscard]] std::optional<std::vector<double>> covariance_identity_residual(
    const CellMeasure& cell, std::span<const EntropyTable> tables, const Parameters& params,
    double xi_threshold);

/// |mean(xi) - A_hat mean(1/a)|; nullopt when A_hat is undefined.
[[nodiscard]] std::optional<double> gradient_representation_residual(const CellMeasure& cell);

/// 0.1 times the space-time RMS of xi over the non-vacuum cells of `traj`.
[[nodiscard]] double default_xi_threshold(const Trajectory& traj, const Parameters& params);

struct CollapseSummary {
  double median_var_a = 0.0;
  double p90_var_a = 0.0;
  std::size_t n_unmasked = 0;
  /// Cells below the xi threshold or without samples.
  std::size_t n_masked = 0;
};

/// Statistics of var_a over cells with mean |xi| > xi_threshold.
[[nodiscard]] CollapseSummary collapse_summary(std::span<const CellMeasure> cells,
                                               double xi_threshold);

/// One summary per rung.
[[nodiscard]] std::vector<CollapseSummary> dirac_collapse_metric(
    const std::vector<std::vector<CellMeasure>>& per_rung, double xi_threshold);

struct FluxGap {
  /// max |m xi - (nu rho xi - a rho xi)/(nu - 1)| over non-vacuum cells.
  double decomposition = 0.0;
  /// Window mean of |<m xi>_k - <m>_f <xi>_f|.
  double m_flux = 0.0;
  /// Window mean of |<a rho xi>_k - <a>_f <rho>_f <xi>_f|.
  double activity_flux = 0.0;
};

/// Per-rung gaps; the finest rung supplies the window averages <.>_f. Windows
/// share a physical layout: window_x counts cells of the coarsest rung.
[[nodiscard]] std::vector<FluxGap> flux_identification_gap(const RefinementLadder& ladder,
                                                           const Parameters& params,
                                                           std::size_t window_t,
                                                           std::size_t window_x);

/// (q - r) int_r^q phi_s'/u^2 du - (int_r^q phi_s' du)(int_r^q u^-2 du).
[[nodiscard]] double two_point_margin(const EntropyIndex& s, double r, double q,
                                      const Parameters& params);

}  // namespace crossdiff::diagnostics
