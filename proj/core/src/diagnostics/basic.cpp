#include "crossdiff/diagnostics/basic.hpp"

#include <algorithm>
#include <cmath>

namespace crossdiff::diagnostics {

BasicChecks check_basic(const Trajectory& traj, const Parameters& /*params*/) {
  BasicChecks out;
  if (traj.step_log.empty()) {
    return out;
  }
  const StepRecord& first = traj.step_log.front();
  out.initial_entropy = first.entropy;
  const auto relative = [](double value, double ref) {
    return ref != 0.0 ? std::abs(value - ref) / std::abs(ref) : std::abs(value);
  };
  double max_rho = 0.0;
  for (std::size_t j = 0; j < traj.step_log.size(); ++j) {
    const StepRecord& r = traj.step_log[j];
    out.mass_drift = std::max({out.mass_drift, relative(r.mass_m, first.mass_m),
                               relative(r.mass_n, first.mass_n)});
    max_rho = std::max(max_rho, r.max_rho);
    if (j > 0) {
      out.entropy_increase =
          std::max(out.entropy_increase, r.entropy - traj.step_log[j - 1].entropy);
    }
  }
  out.max_rho_growth = first.max_rho > 0.0 ? max_rho / first.max_rho - 1.0 : 0.0;
  return out;
}

DissipationBalance entropy_dissipation_balance(const Trajectory& traj,
                                               const Parameters& /*params*/) {
  DissipationBalance out;
  const auto& log = traj.step_log;
  if (log.size() < 2 || traj.snapshots.size() < 2) {
    return out;
  }
  std::size_t j = 0;
  for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
    const double t_end = traj.snapshots[k].t;
    const std::size_t start = j;
    double dissipated = 0.0;
    double viscous = 0.0;
    while (j + 1 < log.size() && log[j].t < t_end) {
      const double dt = log[j].dt;
      dissipated += 0.5 * dt * (log[j].dissipation + log[j + 1].dissipation);
      viscous += 0.5 * dt * (log[j].viscous_dissipation + log[j + 1].viscous_dissipation);
      ++j;
    }
    const double change = log[j].entropy - log[start].entropy;
    const double raw = change + dissipated;
    const double corrected = raw + viscous;
    out.raw_per_interval.push_back(raw);
    out.corrected_per_interval.push_back(corrected);
    out.raw = std::max(out.raw, std::abs(raw));
    out.corrected = std::max(out.corrected, std::abs(corrected));
    if (dissipated > 0.0) {
      out.worst_increase_while_dissipating =
          std::max(out.worst_increase_while_dissipating, change);
    }
  }
  return out;
}

std::vector<double> segregation_overlap(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.snapshots.size());
  for (const SpeciesState& s : traj.snapshots) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      sum += s.m[i] * s.n[i];
    }
    out.push_back(s.h() * sum);
  }
  return out;
}

std::vector<double> restrict_cells(std::span<const double> fine, std::size_t factor) {
  if (factor == 0 || fine.size() % factor != 0) {
    throw DomainError("restriction factor must divide the fine grid size");
  }
  std::vector<double> coarse(fine.size() / factor, 0.0);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    coarse[i / factor] += fine[i];
  }
  for (double& v : coarse) {
    v /= static_cast<double>(factor);
  }
  return coarse;
}

namespace {

std::vector<double> total_density(const SpeciesState& s) {
  std::vector<double> rho(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    rho[i] = s.m[i] + s.n[i];
  }
  return rho;
}

}  // namespace

double rho_distance(const Trajectory& coarse, const Trajectory& fine) {
  if (coarse.snapshots.size() != fine.snapshots.size()) {
    throw DomainError("trajectories do not share snapshot times");
  }
  const std::size_t factor = fine.n_cells() / coarse.n_cells();
  std::vector<double> per_time(coarse.snapshots.size());
  for (std::size_t k = 0; k < coarse.snapshots.size(); ++k) {
    if (std::abs(coarse.snapshots[k].t - fine.snapshots[k].t) > 1e-12) {
      throw DomainError("trajectories do not share snapshot times");
    }
    const std::vector<double> rc = total_density(coarse.snapshots[k]);
    const std::vector<double> rf = restrict_cells(total_density(fine.snapshots[k]), factor);
    double sum = 0.0;
    for (std::size_t i = 0; i < rc.size(); ++i) {
      sum += (rc[i] - rf[i]) * (rc[i] - rf[i]);
    }
    per_time[k] = coarse.h() * sum;
  }
  double total = 0.0;
  for (std::size_t k = 1; k < per_time.size(); ++k) {
    const double dt = coarse.snapshots[k].t - coarse.snapshots[k - 1].t;
    total += 0.5 * dt * (per_time[k] + per_time[k - 1]);
  }
  return std::sqrt(total);
}

std::vector<double> rho_cauchy_l2(const RefinementLadder& ladder) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < ladder.rungs.size(); ++k) {
    out.push_back(rho_distance(ladder.rungs[k].trajectory, ladder.rungs[k + 1].trajectory));
  }
  return out;
}

ConvergenceOrder observed_order(const RefinementLadder& ladder, const Trajectory& reference) {
  ConvergenceOrder out;
  for (const Rung& r : ladder.rungs) {
    out.errors.push_back(rho_distance(r.trajectory, reference));
  }
  for (std::size_t k = 0; k + 1 < out.errors.size(); ++k) {
    out.orders.push_back(std::log2(out.errors[k] / out.errors[k + 1]));
  }
  return out;
}

}  // namespace crossdiff::diagnostics
