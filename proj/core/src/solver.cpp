#include "crossdiff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>

namespace crossdiff {

void SchemeConfig::validate() const {
  if (!(cfl > 0.0 && cfl < 1.0)) {
    throw DomainError("cfl must lie in (0, 1)");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("epsilon must be nonnegative");
  }
  if (n_cells < 8) {
    throw DomainError("n_cells must be at least 8");
  }
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw DomainError("t_final must be nonnegative");
  }
  if (snapshot_every == 0) {
    throw DomainError("snapshot_every must be positive");
  }
  double last = 0.0;
  for (double t : output_times) {
    if (!(t > last) || t > t_final) {
      throw DomainError("output times must increase strictly inside (0, t_final]");
    }
    last = t;
  }
}

namespace {

double param_or(const ScenarioParams& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void reject_unknown(const ScenarioParams& p, const std::string& scenario,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, value] : p) {
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&](const char* k) { return key == k; });
    if (!ok) {
      throw ConfigError("unknown parameter '" + key + "' for scenario " + scenario);
    }
  }
}

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) {
  const auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  if (t <= 0.0) {
    return 0.0;
  }
  if (t >= 1.0) {
    return 1.0;
  }
  const double a = f(t);
  return a / (a + f(1.0 - t));
}

// Smoothed indicator of [left, right], support [left - w, right + w].
double smoothed_indicator(double x, double left, double right, double w) {
  double value = 0.0;
  for (int shift = -1; shift <= 1; ++shift) {
    const double y = x + shift;
    if (w <= 0.0) {
      value += (y >= left && y <= right) ? 1.0 : 0.0;
    } else {
      value += smooth_step((y - (left - w)) / (2.0 * w)) * smooth_step((right + w - y) / (2.0 * w));
    }
  }
  return std::min(value, 1.0);
}

double periodic_gaussian(double x, double center, double sigma) {
  double sum = 0.0;
  for (int shift = -3; shift <= 3; ++shift) {
    const double d = x - center + shift;
    sum += std::exp(-0.5 * d * d / (sigma * sigma));
  }
  return sum;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"constant", "segregated", "mixed_oscillatory",
                                                 "gaussian_bump"};
  return names;
}

SpeciesState initial_data(const std::string& scenario, const ScenarioParams& p,
                          const Grid1D& grid) {
  SpeciesState s;
  s.m.resize(grid.n_cells);
  s.n.resize(grid.n_cells);
  if (scenario == "constant") {
    reject_unknown(p, scenario, {"c_m", "c_n"});
    std::fill(s.m.begin(), s.m.end(), param_or(p, "c_m", 1.0));
    std::fill(s.n.begin(), s.n.end(), param_or(p, "c_n", 1.0));
  } else if (scenario == "segregated") {
    reject_unknown(p, scenario,
                   {"c_m", "c_n", "m_left", "m_right", "n_left", "n_right", "width"});
    const double cm = param_or(p, "c_m", 1.0);
    const double cn = param_or(p, "c_n", 1.0);
    const double w = param_or(p, "width", 0.02);
    if (w < 0.0) {
      throw DomainError("segregated: width must be nonnegative");
    }
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
      const double x = grid.center(i);
      s.m[i] = cm * smoothed_indicator(x, param_or(p, "m_left", 0.1), param_or(p, "m_right", 0.4), w);
      s.n[i] = cn * smoothed_indicator(x, param_or(p, "n_left", 0.6), param_or(p, "n_right", 0.9), w);
    }
  } else if (scenario == "mixed_oscillatory") {
    // Smooth total density; the species split theta = m/rho oscillates with
    // wavenumber round(theta_k (n_cells/128)^theta_scaling). A positive scaling
    // makes the oscillation finer on finer grids, so a ladder built on this
    // preset carries a non-trivial Young measure at t = 0.
    reject_unknown(p, scenario,
                   {"rho_mean", "rho_amp", "theta_mean", "theta_amp", "theta_k", "theta_scaling"});
    const double rm = param_or(p, "rho_mean", 0.1);
    const double ra = param_or(p, "rho_amp", 0.09);
    const double tm = param_or(p, "theta_mean", 0.5);
    const double ta = param_or(p, "theta_amp", 0.4);
    const double tk = param_or(p, "theta_k", 1.0);
    const double scaling = param_or(p, "theta_scaling", 0.0);
    if (rm - std::abs(ra) <= 0.0) {
      throw DomainError("mixed_oscillatory: rho_amp must stay below rho_mean");
    }
    if (tm - std::abs(ta) < 0.0 || tm + std::abs(ta) > 1.0) {
      throw DomainError("mixed_oscillatory: theta must stay inside [0, 1]");
    }
    if (!(scaling >= 0.0 && scaling <= 1.0)) {
      throw DomainError("mixed_oscillatory: theta_scaling must lie in [0, 1]");
    }
    const double wave =
        std::round(tk * std::pow(static_cast<double>(grid.n_cells) / 128.0, scaling));
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
      const double x = grid.center(i);
      const double rho = rm + ra * std::cos(two_pi * x);
      const double theta = tm + ta * std::sin(two_pi * wave * x);
      s.m[i] = theta * rho;
      s.n[i] = (1.0 - theta) * rho;
    }
  } else if (scenario == "gaussian_bump") {
    reject_unknown(p, scenario, {"amp_m", "amp_n", "center_m", "center_n", "sigma", "base_m",
                                 "base_n"});
    const double sigma = param_or(p, "sigma", 0.08);
    if (!(sigma > 0.0)) {
      throw DomainError("gaussian_bump: sigma must be positive");
    }
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
      const double x = grid.center(i);
      s.m[i] = param_or(p, "base_m", 0.1) +
               param_or(p, "amp_m", 1.0) * periodic_gaussian(x, param_or(p, "center_m", 0.35), sigma);
      s.n[i] = param_or(p, "base_n", 0.1) +
               param_or(p, "amp_n", 1.0) * periodic_gaussian(x, param_or(p, "center_n", 0.65), sigma);
    }
  } else {
    throw ConfigError("unknown scenario '" + scenario + "'");
  }
  require_nonnegative(s);
  return s;
}

InterfaceFluxes interface_fluxes(const SpeciesState& state, double epsilon,
                                 const Parameters& params) {
  const std::size_t n_cells = state.size();
  const double inv_h = 1.0 / state.h();
  InterfaceFluxes f;
  f.m.resize(n_cells);
  f.n.resize(n_cells);
  f.velocity.resize(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    const std::size_t r = i + 1 == n_cells ? 0 : i + 1;
    const double u = (state.m[r] + state.n[r] - state.m[i] - state.n[i]) * inv_h;
    // Both species move with velocity -(mobility) u; upwind against that.
    const double m_up = u > 0.0 ? state.m[r] : state.m[i];
    const double n_up = u > 0.0 ? state.n[r] : state.n[i];
    f.velocity[i] = u;
    f.m[i] = -m_up * u - epsilon * (state.m[r] - state.m[i]) * inv_h;
    f.n[i] = -params.nu * n_up * u - epsilon * (state.n[r] - state.n[i]) * inv_h;
  }
  return f;
}

double stable_dt(const SpeciesState& state, const SchemeConfig& config, const Parameters& params) {
  const std::size_t n_cells = state.size();
  const double h = state.h();
  const double speed = std::max(1.0, params.nu);
  double max_v = 0.0;
  double max_mobility = 0.0;
  for (std::size_t i = 0; i < n_cells; ++i) {
    const std::size_t r = i + 1 == n_cells ? 0 : i + 1;
    const double u = (state.m[r] + state.n[r] - state.m[i] - state.n[i]) / h;
    max_v = std::max(max_v, speed * std::abs(u));
    max_mobility = std::max(max_mobility, state.m[i] + params.nu * state.n[i]);
  }
  const double advective = h / (max_v + 1e-30);
  const double diffusive = h * h / (2.0 * (config.epsilon + max_mobility));
  return config.cfl * std::min(advective, diffusive);
}

SpeciesState step(const SpeciesState& state, double dt, const SchemeConfig& config,
                  const Parameters& params, StepStats* stats) {
  const std::size_t n_cells = state.size();
  const InterfaceFluxes f = interface_fluxes(state, config.epsilon, params);
  const double ratio = dt / state.h();
  SpeciesState next;
  next.t = state.t + dt;
  next.m.resize(n_cells);
  next.n.resize(n_cells);
  StepStats local;
  bool finite = true;
  for (std::size_t i = 0; i < n_cells; ++i) {
    const std::size_t l = i == 0 ? n_cells - 1 : i - 1;
    double m = state.m[i] - ratio * (f.m[i] - f.m[l]);
    double n = state.n[i] - ratio * (f.n[i] - f.n[l]);
    finite = finite && std::isfinite(m) && std::isfinite(n);
    local.min_before_clip = std::min({local.min_before_clip, m, n});
    if (m < 0.0) {
      local.clipped_mass -= m * state.h();
      m = 0.0;
    }
    if (n < 0.0) {
      local.clipped_mass -= n * state.h();
      n = 0.0;
    }
    next.m[i] = m;
    next.n[i] = n;
  }
  if (!finite) {
    throw InvariantViolation("non-finite value after step at t = " + std::to_string(state.t),
                             state);
  }
  if (stats != nullptr) {
    *stats = local;
  }
  return next;
}

namespace {

double log_mean(double x, double y) {
  if (std::abs(x - y) <= 1e-12 * std::max(x, y)) {
    return 0.5 * (x + y);
  }
  if (x <= 0.0 || y <= 0.0) {
    return 0.0;
  }
  return (x - y) / (std::log(x) - std::log(y));
}

StepRecord record(const SpeciesState& s, double dt, const SchemeConfig& config,
                  const Parameters& params) {
  StepRecord r;
  r.t = s.t;
  r.dt = dt;
  const std::size_t n_cells = s.size();
  const double h = s.h();
  double mm = 0.0;
  double mn = 0.0;
  double diss = 0.0;
  double visc = 0.0;
  for (std::size_t i = 0; i < n_cells; ++i) {
    const std::size_t j = i + 1 == n_cells ? 0 : i + 1;
    mm += s.m[i];
    mn += s.n[i];
    r.max_rho = std::max(r.max_rho, s.m[i] + s.n[i]);
    const double dm = s.m[j] - s.m[i];
    const double dn = s.n[j] - s.n[i];
    const double drho = dm + dn;
    diss += drho * drho;
    const double lm = std::max(log_mean(s.m[i], s.m[j]), params.rho_floor);
    const double ln = std::max(log_mean(s.n[i], s.n[j]), params.rho_floor);
    visc += dm * dm / lm + dn * dn / (params.nu * ln);
  }
  r.mass_m = h * mm;
  r.mass_n = h * mn;
  r.entropy = entropy_functional(s, params);
  r.dissipation = diss / h;
  r.viscous_dissipation = config.epsilon * visc / h;
  return r;
}

// Same clamp bookkeeping as to_rho_a without building the derived arrays.
double activity_clamp(const SpeciesState& s, const Parameters& params) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double rho = s.m[i] + s.n[i];
    if (rho <= params.rho_floor) {
      continue;
    }
    const double a = (s.m[i] + params.nu * s.n[i]) / rho;
    worst = std::max({worst, params.alpha - a, a - params.beta});
  }
  return worst;
}

class IntervalAccumulator {
public:
  explicit IntervalAccumulator(std::size_t n_cells) : n_cells_(n_cells) { reset(0.0); }

  void reset(double t0) {
    current_ = IntervalAverages{};
    current_.t0 = t0;
    current_.m.assign(n_cells_, 0.0);
    current_.n.assign(n_cells_, 0.0);
    current_.m_xi.assign(n_cells_, 0.0);
    current_.n_xi.assign(n_cells_, 0.0);
  }

  void add(const SpeciesState& s, double dt) {
    const double inv2h = 0.5 / s.h();
    for (std::size_t i = 0; i < n_cells_; ++i) {
      const std::size_t r = i + 1 == n_cells_ ? 0 : i + 1;
      const std::size_t l = i == 0 ? n_cells_ - 1 : i - 1;
      const double xi = (s.m[r] + s.n[r] - s.m[l] - s.n[l]) * inv2h;
      current_.m[i] += dt * s.m[i];
      current_.n[i] += dt * s.n[i];
      current_.m_xi[i] += dt * s.m[i] * xi;
      current_.n_xi[i] += dt * s.n[i] * xi;
    }
  }

  IntervalAverages close(double t1) {
    current_.t1 = t1;
    const double span = t1 - current_.t0;
    const double inv = span > 0.0 ? 1.0 / span : 0.0;
    for (auto* v : {&current_.m, &current_.n, &current_.m_xi, &current_.n_xi}) {
      for (double& x : *v) {
        x *= inv;
      }
    }
    IntervalAverages out = std::move(current_);
    reset(t1);
    return out;
  }

private:
  std::size_t n_cells_;
  IntervalAverages current_;
};

}  // namespace

std::vector<double> uniform_output_times(double t_final, std::size_t count) {
  std::vector<double> times;
  if (t_final <= 0.0 || count == 0) {
    return times;
  }
  times.reserve(count);
  for (std::size_t j = 1; j <= count; ++j) {
    times.push_back(j == count ? t_final
                               : t_final * static_cast<double>(j) / static_cast<double>(count));
  }
  return times;
}

Trajectory run(const SchemeConfig& config, const Parameters& params) {
  return run(config, params, initial_data(config.scenario, config.scenario_params,
                                          Grid1D(config.n_cells)));
}

Trajectory run(const SchemeConfig& config, const Parameters& params, SpeciesState initial) {
  config.validate();
  require_nonnegative(initial);
  if (initial.size() != config.n_cells) {
    throw DomainError("initial state does not match n_cells");
  }
  Trajectory traj;
  traj.config = config;
  traj.params = params;
  traj.params.epsilon = config.epsilon;
  traj.params.t_final = config.t_final;

  SpeciesState state = std::move(initial);
  state.t = 0.0;
  traj.max_clamp = activity_clamp(state, params);
  traj.snapshots.push_back(state);

  std::vector<double> targets = config.output_times;
  const bool exact_outputs = !targets.empty();
  if (exact_outputs && targets.back() < config.t_final) {
    targets.push_back(config.t_final);
  }
  std::size_t next_target = 0;

  IntervalAccumulator acc(config.n_cells);
  std::size_t steps_since_snapshot = 0;
  while (state.t < config.t_final) {
    double dt = stable_dt(state, config, params);
    double land = config.t_final;
    if (exact_outputs) {
      land = targets[next_target];
    }
    bool landed = false;
    if (state.t + dt >= land) {
      dt = land - state.t;
      landed = true;
    }
    traj.step_log.push_back(record(state, dt, config, params));
    acc.add(state, dt);

    StepStats stats;
    SpeciesState next = step(state, dt, config, params, &stats);
    traj.min_before_clip = std::min(traj.min_before_clip, stats.min_before_clip);
    traj.clipped_mass += stats.clipped_mass;
    next.t = landed ? land : state.t + dt;
    state = std::move(next);
    traj.max_clamp = std::max(traj.max_clamp, activity_clamp(state, params));
    ++steps_since_snapshot;

    const bool at_end = state.t >= config.t_final;
    const bool take = exact_outputs ? landed : (at_end || steps_since_snapshot >= config.snapshot_every);
    if (take) {
      traj.snapshots.push_back(state);
      traj.intervals.push_back(acc.close(state.t));
      steps_since_snapshot = 0;
      if (exact_outputs && landed) {
        ++next_target;
      }
    }
  }
  traj.step_log.push_back(record(state, 0.0, config, params));
  return traj;
}

RefinementLadder refine_sequence(const SchemeConfig& base, const Parameters& params,
                                 std::size_t n_rungs, bool parallel) {
  if (n_rungs < 3) {
    throw DomainError("a refinement ladder needs at least 3 rungs");
  }
  RefinementLadder ladder;
  ladder.output_times =
      base.output_times.empty() ? uniform_output_times(base.t_final, 40) : base.output_times;
  std::vector<SchemeConfig> configs;
  for (std::size_t k = 0; k < n_rungs; ++k) {
    SchemeConfig c = base;
    c.epsilon = base.epsilon * std::ldexp(1.0, -static_cast<int>(k));
    c.n_cells = base.n_cells << k;
    c.output_times = ladder.output_times;
    configs.push_back(std::move(c));
  }
  ladder.rungs.resize(n_rungs);
  if (parallel) {
    std::vector<std::future<Trajectory>> jobs;
    for (const auto& c : configs) {
      jobs.push_back(std::async(std::launch::async, [&c, &params] { return run(c, params); }));
    }
    for (std::size_t k = 0; k < n_rungs; ++k) {
      ladder.rungs[k] = {configs[k].epsilon, configs[k].n_cells, jobs[k].get()};
    }
  } else {
    for (std::size_t k = 0; k < n_rungs; ++k) {
      ladder.rungs[k] = {configs[k].epsilon, configs[k].n_cells, run(configs[k], params)};
    }
  }
  return ladder;
}

}  // namespace crossdiff
