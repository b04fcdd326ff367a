#pragma once

/// @file basic.hpp
/// @brief Conservation, maximum principle, entropy dissipation and
/// self-convergence checks on trajectories and ladders.

#include "crossdiff/solver.hpp"

#include <span>
#include <vector>

namespace crossdiff::diagnostics {

struct BasicChecks {
  /// max relative deviation of int m and int n from their initial values.
  double mass_drift = 0.0;
  /// max_t max_x rho / max_x rho_0 - 1.
  double max_rho_growth = 0.0;
  /// max over steps of (H(t + dt) - H(t))^+.
  double entropy_increase = 0.0;
  double initial_entropy = 0.0;
};

[[nodiscard]] BasicChecks check_basic(const Trajectory& traj, const Parameters& params);

struct DissipationBalance {
  /// max over output intervals of |H(t2) - H(t1) + int int |d_x rho|^2|.
  double raw = 0.0;
  /// Same with the viscous entropy dissipation added back in.
  double corrected = 0.0;
  std::vector<double> raw_per_interval;
  std::vector<double> corrected_per_interval;
  /// Largest entropy increase over an interval on which int |d_x rho|^2 > 0.
  double worst_increase_while_dissipating = 0.0;
};

/// Time integrals use the trapezoidal rule over the per-step log.
[[nodiscard]] DissipationBalance entropy_dissipation_balance(const Trajectory& traj,
                                                             const Parameters& params);

/// int m n dx at every snapshot.
[[nodiscard]] std::vector<double> segregation_overlap(const Trajectory& traj);

/// Averages consecutive groups of `factor` cells.
[[nodiscard]] std::vector<double> restrict_cells(std::span<const double> fine, std::size_t factor);

/// L2(space-time) distance of rho between two trajectories with shared
/// snapshot times; the finer one is restricted to the coarser grid.
[[nodiscard]] double rho_distance(const Trajectory& coarse, const Trajectory& fine);

/// || rho^k - rho^{k+1} || for consecutive rungs.
[[nodiscard]] std::vector<double> rho_cauchy_l2(const RefinementLadder& ladder);

struct ConvergenceOrder {
  /// Distances of each rung to the reference.
  std::vector<double> errors;
  /// log2(errors[k] / errors[k+1]).
  std::vector<double> orders;
};

[[nodiscard]] ConvergenceOrder observed_order(const RefinementLadder& ladder,
                                              const Trajectory& reference);

}  // namespace crossdiff::diagnostics
