#pragma once

/// @file residuals.hpp
/// @brief Discrete residuals of the affine balance laws, the entropy family,
/// and the weak formulation, assembled on the snapshot grid of a trajectory.
///
/// Time derivatives are forward differences between consecutive snapshots.
/// Affine fluxes use the exact interval averages the solver accumulates;
/// entropy-family fluxes use the trapezoidal average of the two snapshots.

#include "crossdiff/entropy_family.hpp"
#include "crossdiff/solver.hpp"

#include <span>
#include <vector>

namespace crossdiff::diagnostics {

/// Squared H^-1(T) norm sum_k |r_hat_k|^2 / (1 + (2 pi k)^2) of a periodic
/// cell array, with r_hat_k = h sum_i r_i exp(-2 pi i k x_i).
[[nodiscard]] double hminus1_norm_squared(std::span<const double> r);

/// L2(0,T; H^-1) norm of a residual that is constant on each time interval.
[[nodiscard]] double space_time_hminus1(const std::vector<std::vector<double>>& residuals,
                                        std::span<const double> durations);

struct AffineResiduals {
  double r0_norm = 0.0;
  double r1_norm = 0.0;
  /// One array per snapshot interval.
  std::vector<std::vector<double>> r0;
  std::vector<std::vector<double>> r1;
  std::vector<double> durations;
};

/// r0 = D_t rho - D_x(a rho xi), r1 = D_t(a rho) - D_x(((nu+1)a - nu) rho xi).
/// Throws DomainError with fewer than 3 snapshots.
[[nodiscard]] AffineResiduals affine_residual_norms(const Trajectory& traj,
                                                    const Parameters& params);

struct FamilyResidual {
  double s = 0.0;
  /// || D_t(rho^s phi_s(a)) - D_x(M_s(a) rho^s xi) ||_L1
  double l1 = 0.0;
  /// || (1-s) M_s rho^{s-1} xi^2 ||_L1, the exact source of the limit law.
  double source_l1 = 0.0;
  /// || r_s - (1-s) M_s rho^{s-1} xi^2 ||_L1
  double source_gap_l1 = 0.0;
};

[[nodiscard]] std::vector<FamilyResidual> family_residual_norms(
    const Trajectory& traj, const Parameters& params, std::span<const EntropyTable> tables);

[[nodiscard]] std::vector<FamilyResidual> family_residual_norms(
    const Trajectory& traj, const Parameters& params, std::span<const EntropyIndex> indices);

struct WeakResidual {
  /// Max over the whole test family.
  double m = 0.0;
  double n = 0.0;
  /// Max over the members that are constant in x.
  double m_constant_mode = 0.0;
  double n_constant_mode = 0.0;
  std::size_t n_tests = 0;
};

/// Weak-form residuals against phi(t, x) = b(t) e(x), with e in
/// {1, cos 2 pi k x, sin 2 pi k x : k <= test_modes} and
/// b in {(1 - t/T)^2, (t/T)(1 - t/T)^2}.
[[nodiscard]] WeakResidual weak_solution_residual(const Trajectory& traj,
                                                  const Parameters& params, int test_modes);

}  // namespace crossdiff::diagnostics
