#include "crossdiff/diagnostics/residuals.hpp"

#include "crossdiff/quadrature.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace crossdiff::diagnostics {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> centred_difference(std::span<const double> f, double h) {
  return periodic_gradient(f, h);
}

std::vector<double> xi_of(const SpeciesState& s) {
  std::vector<double> rho(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    rho[i] = s.m[i] + s.n[i];
  }
  return periodic_gradient(rho, s.h());
}

void require_snapshots(const Trajectory& traj) {
  if (traj.snapshots.size() < 3) {
    throw DomainError("residual assembly needs at least 3 snapshots");
  }
  if (traj.intervals.size() + 1 != traj.snapshots.size()) {
    throw DomainError("trajectory is missing interval averages");
  }
}

}  // namespace

double hminus1_norm_squared(std::span<const double> r) {
  const std::size_t n = r.size();
  if (n == 0) {
    return 0.0;
  }
  std::vector<std::complex<double>> in(r.begin(), r.end());
  std::vector<std::complex<double>> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  const double h = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double wave = k <= n / 2 ? static_cast<double>(k)
                                   : static_cast<double>(k) - static_cast<double>(n);
    const double weight = 1.0 / (1.0 + kTwoPi * wave * kTwoPi * wave);
    sum += std::norm(h * out[k]) * weight;
  }
  return sum;
}

double space_time_hminus1(const std::vector<std::vector<double>>& residuals,
                          std::span<const double> durations) {
  double total = 0.0;
  for (std::size_t j = 0; j < residuals.size(); ++j) {
    total += durations[j] * hminus1_norm_squared(residuals[j]);
  }
  return std::sqrt(total);
}

AffineResiduals affine_residual_norms(const Trajectory& traj, const Parameters& params) {
  require_snapshots(traj);
  const double h = traj.h();
  const double nu = params.nu;
  AffineResiduals out;
  for (std::size_t j = 0; j + 1 < traj.snapshots.size(); ++j) {
    const SpeciesState& s0 = traj.snapshots[j];
    const SpeciesState& s1 = traj.snapshots[j + 1];
    const IntervalAverages& avg = traj.intervals[j];
    const double dt = s1.t - s0.t;
    const std::size_t n_cells = s0.size();
    std::vector<double> flux0(n_cells);
    std::vector<double> flux1(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
      flux0[i] = avg.m_xi[i] + nu * avg.n_xi[i];
      flux1[i] = avg.m_xi[i] + nu * nu * avg.n_xi[i];
    }
    const std::vector<double> div0 = centred_difference(flux0, h);
    const std::vector<double> div1 = centred_difference(flux1, h);
    std::vector<double> r0(n_cells);
    std::vector<double> r1(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
      const double drho = (s1.m[i] + s1.n[i]) - (s0.m[i] + s0.n[i]);
      const double darho = (s1.m[i] + nu * s1.n[i]) - (s0.m[i] + nu * s0.n[i]);
      r0[i] = drho / dt - div0[i];
      r1[i] = darho / dt - div1[i];
    }
    out.r0.push_back(std::move(r0));
    out.r1.push_back(std::move(r1));
    out.durations.push_back(dt);
  }
  out.r0_norm = space_time_hminus1(out.r0, out.durations);
  out.r1_norm = space_time_hminus1(out.r1, out.durations);
  return out;
}

namespace {

struct FamilyFields {
  std::vector<double> density;
  std::vector<double> flux;
  std::vector<double> source;
};

FamilyFields family_fields(const SpeciesState& state, const Parameters& params,
                           const EntropyTable& table) {
  const DerivedState d = to_rho_a(state, params);
  const double s = table.index().value();
  FamilyFields f;
  f.density.assign(state.size(), 0.0);
  f.flux.assign(state.size(), 0.0);
  f.source.assign(state.size(), 0.0);
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (d.vacuum[i]) {
      continue;
    }
    const double rho_s = std::pow(d.rho[i], s);
    const double m = table.flux(d.a[i]);
    f.density[i] = rho_s * table.phi(d.a[i]);
    f.flux[i] = m * rho_s * d.xi[i];
    f.source[i] = (1.0 - s) * m * rho_s / d.rho[i] * d.xi[i] * d.xi[i];
  }
  return f;
}

}  // namespace

std::vector<FamilyResidual> family_residual_norms(const Trajectory& traj,
                                                  const Parameters& params,
                                                  std::span<const EntropyTable> tables) {
  require_snapshots(traj);
  const double h = traj.h();
  std::vector<FamilyResidual> out;
  for (const EntropyTable& table : tables) {
    FamilyResidual res;
    res.s = table.index().value();
    FamilyFields prev = family_fields(traj.snapshots.front(), params, table);
    for (std::size_t j = 0; j + 1 < traj.snapshots.size(); ++j) {
      FamilyFields next = family_fields(traj.snapshots[j + 1], params, table);
      const double dt = traj.snapshots[j + 1].t - traj.snapshots[j].t;
      const std::size_t n_cells = prev.density.size();
      std::vector<double> flux(n_cells);
      for (std::size_t i = 0; i < n_cells; ++i) {
        flux[i] = 0.5 * (prev.flux[i] + next.flux[i]);
      }
      const std::vector<double> div = centred_difference(flux, h);
      double l1 = 0.0;
      double src = 0.0;
      double gap = 0.0;
      for (std::size_t i = 0; i < n_cells; ++i) {
        const double r = (next.density[i] - prev.density[i]) / dt - div[i];
        const double source = 0.5 * (prev.source[i] + next.source[i]);
        l1 += std::abs(r);
        src += std::abs(source);
        gap += std::abs(r - source);
      }
      res.l1 += dt * h * l1;
      res.source_l1 += dt * h * src;
      res.source_gap_l1 += dt * h * gap;
      prev = std::move(next);
    }
    out.push_back(res);
  }
  return out;
}

std::vector<FamilyResidual> family_residual_norms(const Trajectory& traj,
                                                  const Parameters& params,
                                                  std::span<const EntropyIndex> indices) {
  std::vector<EntropyTable> tables;
  tables.reserve(indices.size());
  for (const EntropyIndex& s : indices) {
    tables.emplace_back(s, params);
  }
  return family_residual_norms(traj, params, tables);
}

namespace {

struct SpaceMode {
  std::function<double(double)> value;
  std::function<double(double)> slope;
  bool constant = false;
};

std::vector<SpaceMode> space_modes(int test_modes) {
  std::vector<SpaceMode> modes;
  modes.push_back({[](double) { return 1.0; }, [](double) { return 0.0; }, true});
  for (int k = 1; k <= test_modes; ++k) {
    const double w = kTwoPi * k;
    modes.push_back({[w](double x) { return std::cos(w * x); },
                     [w](double x) { return -w * std::sin(w * x); }, false});
    modes.push_back({[w](double x) { return std::sin(w * x); },
                     [w](double x) { return w * std::cos(w * x); }, false});
  }
  return modes;
}

struct TimeFactor {
  std::function<double(double)> value;
  std::function<double(double)> slope;
};

std::vector<TimeFactor> time_factors(double horizon) {
  const double T = horizon;
  return {
      {[T](double t) { return (1 - t / T) * (1 - t / T); },
       [T](double t) { return -2.0 * (1 - t / T) / T; }},
      {[T](double t) { return (t / T) * (1 - t / T) * (1 - t / T); },
       [T](double t) {
         const double tau = t / T;
         return ((1 - tau) * (1 - tau) - 2.0 * tau * (1 - tau)) / T;
       }},
  };
}

// int_{t0}^{t1} w(t) G(t) dt with G known through its interval mean and its
// endpoint values: G ~ mean + (t - mid)(G1 - G0)/dt.
double weighted_time_integral(const std::function<double(double)>& w, double t0, double t1,
                              double mean, double g0, double g1) {
  const double mid = 0.5 * (t0 + t1);
  const double w0 = quadrature::gauss_legendre(w, t0, t1);
  const double w1 = quadrature::gauss_legendre([&](double t) { return w(t) * (t - mid); }, t0, t1);
  return w0 * mean + w1 * (g1 - g0) / (t1 - t0);
}

double project(std::span<const double> field, const std::vector<double>& mode, double h) {
  double sum = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    sum += field[i] * mode[i];
  }
  return h * sum;
}

}  // namespace

WeakResidual weak_solution_residual(const Trajectory& traj, const Parameters& params,
                                    int test_modes) {
  require_snapshots(traj);
  WeakResidual out;
  const double horizon = traj.config.t_final;
  const std::size_t n_cells = traj.n_cells();
  const double h = traj.h();
  const Grid1D grid(n_cells);

  // Species fluxes m xi and n xi at each snapshot.
  std::vector<std::vector<double>> m_xi;
  std::vector<std::vector<double>> n_xi;
  for (const SpeciesState& s : traj.snapshots) {
    const std::vector<double> xi = xi_of(s);
    std::vector<double> fm(n_cells);
    std::vector<double> fn(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
      fm[i] = s.m[i] * xi[i];
      fn[i] = s.n[i] * xi[i];
    }
    m_xi.push_back(std::move(fm));
    n_xi.push_back(std::move(fn));
  }

  for (const SpaceMode& mode : space_modes(test_modes)) {
    std::vector<double> e(n_cells);
    std::vector<double> de(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
      e[i] = mode.value(grid.center(i));
      de[i] = mode.slope(grid.center(i));
    }
    for (const TimeFactor& b : time_factors(horizon)) {
      double res_m = -b.value(0.0) * project(traj.snapshots.front().m, e, h);
      double res_n = -b.value(0.0) * project(traj.snapshots.front().n, e, h);
      for (std::size_t j = 0; j < traj.intervals.size(); ++j) {
        const IntervalAverages& avg = traj.intervals[j];
        const SpeciesState& s0 = traj.snapshots[j];
        const SpeciesState& s1 = traj.snapshots[j + 1];
        const double t0 = s0.t;
        const double t1 = s1.t;
        res_m -= weighted_time_integral(b.slope, t0, t1, project(avg.m, e, h),
                                        project(s0.m, e, h), project(s1.m, e, h));
        res_n -= weighted_time_integral(b.slope, t0, t1, project(avg.n, e, h),
                                        project(s0.n, e, h), project(s1.n, e, h));
        if (!mode.constant) {
          res_m += weighted_time_integral(b.value, t0, t1, project(avg.m_xi, de, h),
                                          project(m_xi[j], de, h), project(m_xi[j + 1], de, h));
          res_n += params.nu * weighted_time_integral(b.value, t0, t1, project(avg.n_xi, de, h),
                                                      project(n_xi[j], de, h),
                                                      project(n_xi[j + 1], de, h));
        }
      }
      out.m = std::max(out.m, std::abs(res_m));
      out.n = std::max(out.n, std::abs(res_n));
      if (mode.constant) {
        out.m_constant_mode = std::max(out.m_constant_mode, std::abs(res_m));
        out.n_constant_mode = std::max(out.n_constant_mode, std::abs(res_n));
      }
      ++out.n_tests;
    }
  }
  return out;
}

}  // namespace crossdiff::diagnostics
