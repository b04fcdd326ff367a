#pragma once

/// @file solver.hpp
/// @brief Explicit viscous finite-volume scheme on the periodic grid.
///
///   d_t m - d_x(m d_x rho) = eps d_xx m
///   d_t n - nu d_x(n d_x rho) = eps d_xx n
///
/// Interface velocity u = (rho_{i+1} - rho_i)/h; each species is upwinded
/// with its own speed (1 or nu) and carries a centred viscous flux. Updates
/// are conservative, so discrete masses only change through clipping.

#include "crossdiff/state.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace crossdiff {

/// A step produced non-finite values; `dump` holds the offending state.
class InvariantViolation : public std::runtime_error {
public:
  InvariantViolation(const std::string& what, SpeciesState dump)
      : std::runtime_error(what), dump_(std::move(dump)) {}
  [[nodiscard]] const SpeciesState& dump() const { return dump_; }

private:
  SpeciesState dump_;
};

using ScenarioParams = std::map<std::string, double>;

struct SchemeConfig {
  double epsilon = 1e-3;
  double cfl = 0.4;
  double t_final = 0.25;
  std::size_t n_cells = 128;
  /// Snapshot stride in steps; ignored when output_times is set.
  std::size_t snapshot_every = 100;
  std::string scenario = "mixed_oscillatory";
  ScenarioParams scenario_params;
  /// Exact output times (increasing, inside (0, t_final]). The scheme shortens
  /// steps to land on them; t = 0 and t_final are always recorded.
  std::vector<double> output_times;

  /// Throws DomainError on cfl outside (0,1), negative epsilon or n_cells < 8.
  void validate() const;
};

struct StepRecord {
  double t = 0.0;
  double dt = 0.0;
  double mass_m = 0.0;
  double mass_n = 0.0;
  double entropy = 0.0;
  double max_rho = 0.0;
  /// Sum h ((rho_{i+1} - rho_i)/h)^2 at the start of the step.
  double dissipation = 0.0;
  /// Viscous entropy dissipation estimate eps (|d_x m|^2/m + |d_x n|^2/(nu n)).
  double viscous_dissipation = 0.0;
};

/// Exact time averages over one snapshot interval, accumulated step by step.
struct IntervalAverages {
  double t0 = 0.0;
  double t1 = 0.0;
  std::vector<double> m;
  std::vector<double> n;
  /// m xi and n xi with the cell-centred xi.
  std::vector<double> m_xi;
  std::vector<double> n_xi;
};

struct StepStats {
  /// Smallest value seen before clipping (0 if nothing went negative).
  double min_before_clip = 0.0;
  double clipped_mass = 0.0;
};

struct Trajectory {
  Parameters params;
  SchemeConfig config;
  std::vector<SpeciesState> snapshots;
  std::vector<StepRecord> step_log;
  std::vector<IntervalAverages> intervals;
  double min_before_clip = 0.0;
  double clipped_mass = 0.0;
  double max_clamp = 0.0;

  [[nodiscard]] std::size_t n_cells() const { return config.n_cells; }
  [[nodiscard]] double h() const { return 1.0 / static_cast<double>(config.n_cells); }
};

struct Rung {
  double epsilon = 0.0;
  std::size_t n_cells = 0;
  Trajectory trajectory;
};

/// epsilon_k = epsilon_0 2^-k, n_cells_k = n_cells_0 2^k, shared output times.
struct RefinementLadder {
  std::vector<Rung> rungs;
  std::vector<double> output_times;
};

[[nodiscard]] SpeciesState initial_data(const std::string& scenario, const ScenarioParams& params,
                                        const Grid1D& grid);

/// Names accepted by initial_data.
[[nodiscard]] const std::vector<std::string>& scenario_names();

struct InterfaceFluxes {
  /// Index i holds the flux through x_{i+1/2}.
  std::vector<double> m;
  std::vector<double> n;
  std::vector<double> velocity;
};

[[nodiscard]] InterfaceFluxes interface_fluxes(const SpeciesState& state, double epsilon,
                                               const Parameters& params);

[[nodiscard]] double stable_dt(const SpeciesState& state, const SchemeConfig& config,
                               const Parameters& params);

/// One forward-Euler step of size dt. Negative round-off is clipped to zero
/// and reported in `stats`. Throws InvariantViolation on non-finite output.
[[nodiscard]] SpeciesState step(const SpeciesState& state, double dt, const SchemeConfig& config,
                                const Parameters& params, StepStats* stats = nullptr);

/// Integrates from the scenario's initial data to config.t_final.
[[nodiscard]] Trajectory run(const SchemeConfig& config, const Parameters& params);

/// Same, from a caller-supplied initial state.
[[nodiscard]] Trajectory run(const SchemeConfig& config, const Parameters& params,
                             SpeciesState initial);

/// Uniform output grid t_final * j / count, j = 1..count.
[[nodiscard]] std::vector<double> uniform_output_times(double t_final, std::size_t count);

/// Runs n_rungs >= 3 rungs. If base.output_times is empty, 40 uniform output
/// times are shared. Rungs run on separate threads when `parallel` is set.
[[nodiscard]] RefinementLadder refine_sequence(const SchemeConfig& base, const Parameters& params,
                                               std::size_t n_rungs, bool parallel = false);

}  // namespace crossdiff
