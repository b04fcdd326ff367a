#include "crossdiff/state.hpp"

#include <algorithm>
#include <cmath>

namespace crossdiff {

Parameters Parameters::make(double nu, double epsilon, double t_final, double rho_floor) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw DomainError("nu must be a positive finite number");
  }
  if (!(epsilon >= 0.0)) {
    throw DomainError("epsilon must be nonnegative");
  }
  if (!(t_final >= 0.0)) {
    throw DomainError("t_final must be nonnegative");
  }
  if (!(rho_floor > 0.0)) {
    throw DomainError("rho_floor must be positive");
  }
  Parameters p;
  p.nu = nu;
  p.alpha = std::min(1.0, nu);
  p.beta = std::max(1.0, nu);
  p.epsilon = epsilon;
  p.t_final = t_final;
  p.rho_floor = rho_floor;
  return p;
}

Grid1D::Grid1D(std::size_t cells) : n_cells(cells), h(1.0 / static_cast<double>(cells)) {
  if (cells == 0) {
    throw DomainError("grid needs at least one cell");
  }
}

void require_nonnegative(const SpeciesState& state) {
  if (state.m.size() != state.n.size()) {
    throw DomainError("species arrays differ in length");
  }
  for (std::size_t i = 0; i < state.m.size(); ++i) {
    if (!(state.m[i] >= 0.0) || !(state.n[i] >= 0.0) || !std::isfinite(state.m[i]) ||
        !std::isfinite(state.n[i])) {
      throw InvalidDensity("species density negative or not finite at cell " + std::to_string(i));
    }
  }
}

DerivedState to_rho_a(const SpeciesState& state, const Parameters& params) {
  require_nonnegative(state);
  const std::size_t n_cells = state.size();
  DerivedState d;
  d.rho.resize(n_cells);
  d.a.resize(n_cells);
  d.vacuum.assign(n_cells, 0);
  for (std::size_t i = 0; i < n_cells; ++i) {
    const double rho = state.m[i] + state.n[i];
    d.rho[i] = rho;
    if (rho <= params.rho_floor) {
      d.vacuum[i] = 1;
      d.a[i] = params.vacuum_activity();
      continue;
    }
    const double raw = (state.m[i] + params.nu * state.n[i]) / rho;
    const double clamped = std::clamp(raw, params.alpha, params.beta);
    d.clamp_magnitude = std::max(d.clamp_magnitude, std::abs(raw - clamped));
    d.a[i] = clamped;
  }
  d.xi = n_cells > 0 ? periodic_gradient(d.rho, state.h()) : std::vector<double>{};
  return d;
}

SpeciesState from_rho_a(std::span<const double> rho, std::span<const double> a,
                        const Parameters& params, double t) {
  if (params.equal_mobility()) {
    throw DomainError("species cannot be recovered from (rho, a) when nu = 1");
  }
  if (rho.size() != a.size()) {
    throw DomainError("rho and a differ in length");
  }
  constexpr double kTol = 1e-12;
  SpeciesState s;
  s.t = t;
  s.m.resize(rho.size());
  s.n.resize(rho.size());
  const double denom = params.nu - 1.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] >= 0.0)) {
      throw DomainError("negative total density at cell " + std::to_string(i));
    }
    if (!(a[i] >= params.alpha - kTol && a[i] <= params.beta + kTol)) {
      throw DomainError("activity outside [alpha, beta] at cell " + std::to_string(i));
    }
    const double ai = std::clamp(a[i], params.alpha, params.beta);
    s.m[i] = std::max(0.0, rho[i] * (params.nu - ai) / denom);
    s.n[i] = std::max(0.0, rho[i] * (ai - 1.0) / denom);
  }
  return s;
}

std::vector<double> periodic_gradient(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> g(n);
  const double inv = 0.5 / h;
  for (std::size_t i = 0; i < n; ++i) {
    const double right = f[i + 1 == n ? 0 : i + 1];
    const double left = f[i == 0 ? n - 1 : i - 1];
    g[i] = (right - left) * inv;
  }
  return g;
}

std::vector<double> periodic_laplacian(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> g(n);
  const double inv = 1.0 / (h * h);
  for (std::size_t i = 0; i < n; ++i) {
    const double right = f[i + 1 == n ? 0 : i + 1];
    const double left = f[i == 0 ? n - 1 : i - 1];
    g[i] = (right - 2.0 * f[i] + left) * inv;
  }
  return g;
}

double integrate(std::span<const double> f, double h) {
  double sum = 0.0;
  for (double v : f) {
    sum += v;
  }
  return h * sum;
}

double entropy_density(double z) {
  if (z <= 0.0) {
    return 0.0;
  }
  return z * std::log(z) - z;
}

double entropy_functional(const SpeciesState& state, const Parameters& params) {
  double sum = 0.0;
  const double inv_nu = 1.0 / params.nu;
  for (std::size_t i = 0; i < state.size(); ++i) {
    sum += entropy_density(state.m[i]) + inv_nu * entropy_density(state.n[i]);
  }
  return state.h() * sum;
}

}  // namespace crossdiff
