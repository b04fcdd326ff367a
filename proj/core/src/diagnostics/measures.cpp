#include "crossdiff/diagnostics/measures.hpp"

#include "crossdiff/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace crossdiff::diagnostics {

namespace {

// Mean of x and covariance of (x, y), both from deviations against the first
// pair so identical samples give exactly zero.
struct Moments {
  double mean_x = 0.0;
  double cov = 0.0;
};

template <class FX, class FY>
Moments shifted_moments(const std::vector<std::pair<double, double>>& samples, FX fx, FY fy) {
  Moments out;
  if (samples.empty()) {
    return out;
  }
  const double x0 = fx(samples.front());
  const double y0 = fy(samples.front());
  double sx = 0.0;
  double sy = 0.0;
  double sxy = 0.0;
  for (const auto& p : samples) {
    const double dx = fx(p) - x0;
    const double dy = fy(p) - y0;
    sx += dx;
    sy += dy;
    sxy += dx * dy;
  }
  const double inv = 1.0 / static_cast<double>(samples.size());
  out.mean_x = x0 + sx * inv;
  out.cov = sxy * inv - (sx * inv) * (sy * inv);
  return out;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) {
    return 0.0;
  }
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

void check_windows(std::size_t window_t, std::size_t window_x) {
  if (window_t < 4 || window_x < 4) {
    throw DomainError("macro-cells need at least 4 x 4 samples");
  }
}

std::size_t first_windowed_snapshot(const Trajectory& traj, std::size_t window_t) {
  const std::size_t count = traj.snapshots.size();
  if (count < window_t) {
    throw DomainError("fewer snapshots than window_t");
  }
  return count % window_t;
}

}  // namespace

CellMeasure make_cell_measure(std::vector<std::pair<double, double>> samples,
                              std::size_t n_vacuum) {
  CellMeasure c;
  c.samples = std::move(samples);
  c.n_vacuum = n_vacuum;
  if (c.samples.empty()) {
    return c;
  }
  const auto a = [](const std::pair<double, double>& p) { return p.first; };
  const auto xi = [](const std::pair<double, double>& p) { return p.second; };
  const Moments ma = shifted_moments(c.samples, a, a);
  const Moments mx = shifted_moments(c.samples, xi, xi);
  c.mean_a = ma.mean_x;
  c.var_a = std::max(0.0, ma.cov);
  c.mean_xi = mx.mean_x;
  c.std_xi = std::sqrt(std::max(0.0, mx.cov));
  double abs_sum = 0.0;
  double axi = 0.0;
  for (const auto& p : c.samples) {
    abs_sum += std::abs(p.second);
    axi += p.first * p.second;
  }
  const double n = static_cast<double>(c.samples.size());
  c.mean_abs_xi = abs_sum / n;
  if (c.samples.size() >= CellMeasure::kMinSamples) {
    c.a_hat = axi / n;
  }
  c.band = 3.0 / std::sqrt(n);
  return c;
}

std::vector<CellMeasure> estimate_cell_measures(const Trajectory& traj, std::size_t window_t,
                                                std::size_t window_x, const Parameters& params) {
  check_windows(window_t, window_x);
  const std::size_t n_cells = traj.snapshots.empty() ? 0 : traj.snapshots.front().size();
  if (n_cells == 0 || n_cells % window_x != 0) {
    throw DomainError("window_x must divide the number of cells");
  }
  const std::size_t start = first_windowed_snapshot(traj, window_t);
  const std::size_t n_wt = (traj.snapshots.size() - start) / window_t;
  const std::size_t n_wx = n_cells / window_x;

  std::vector<DerivedState> derived;
  derived.reserve(traj.snapshots.size() - start);
  for (std::size_t j = start; j < traj.snapshots.size(); ++j) {
    derived.push_back(to_rho_a(traj.snapshots[j], params));
  }

  std::vector<CellMeasure> out;
  out.reserve(n_wt * n_wx);
  for (std::size_t ct = 0; ct < n_wt; ++ct) {
    for (std::size_t cx = 0; cx < n_wx; ++cx) {
      std::vector<std::pair<double, double>> samples;
      std::size_t vacuum = 0;
      for (std::size_t j = ct * window_t; j < (ct + 1) * window_t; ++j) {
        const DerivedState& d = derived[j];
        for (std::size_t i = cx * window_x; i < (cx + 1) * window_x; ++i) {
          if (d.vacuum[i]) {
            ++vacuum;
          } else {
            samples.emplace_back(d.a[i], d.xi[i]);
          }
        }
      }
      CellMeasure c = make_cell_measure(std::move(samples), vacuum);
      c.cell_t = ct;
      c.cell_x = cx;
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<std::vector<CellMeasure>> ladder_cell_measures(const RefinementLadder& ladder,
                                                           std::size_t window_t,
                                                           std::size_t window_x,
                                                           const Parameters& params) {
  std::vector<std::vector<CellMeasure>> out;
  for (const Rung& r : ladder.rungs) {
    out.push_back(estimate_cell_measures(r.trajectory, window_t, window_x, params));
  }
  return out;
}

std::optional<std::vector<double>> first_hit_residual(const CellMeasure& cell,
                                                      std::span<const EntropyTable> tables) {
  if (!cell.a_hat) {
    return std::nullopt;
  }
  double sq = 0.0;
  for (const auto& p : cell.samples) {
    sq += p.first * p.second * p.first * p.second;
  }
  const double rms = std::sqrt(sq / static_cast<double>(cell.samples.size()));
  std::vector<double> out;
  out.reserve(tables.size());
  for (const EntropyTable& table : tables) {
    const double scale = rms * table.phi_values().back();
    const Moments m = shifted_moments(
        cell.samples, [](const auto& p) { return p.first * p.second; },
        [&](const auto& p) { return table.phi(p.first); });
    out.push_back(scale > 0.0 ? std::abs(m.cov) / scale : 0.0);
  }
  return out;
}

std::optional<std::vector<double>> covariance_identity_residual(
    const CellMeasure& cell, std::span<const EntropyTable> tables, const Parameters& params,
    double xi_threshold) {
  if (!cell.a_hat || !(std::abs(*cell.a_hat) > xi_threshold)) {
    return std::nullopt;
  }
  std::vector<double> out;
  out.reserve(tables.size());
  const auto a = [](const auto& p) { return p.first; };
  const auto inv_a = [](const auto& p) { return 1.0 / p.first; };
  for (const EntropyTable& table : tables) {
    const Moments left = shifted_moments(
        cell.samples, a, [&](const auto& p) { return table.flux(p.first) / p.first; });
    const Moments right =
        shifted_moments(cell.samples, [&](const auto& p) { return table.phi(p.first); }, inv_a);
    out.push_back(std::abs(left.cov + params.nu * right.cov));
  }
  return out;
}

std::optional<double> gradient_representation_residual(const CellMeasure& cell) {
  if (!cell.a_hat) {
    return std::nullopt;
  }
  double inv = 0.0;
  for (const auto& p : cell.samples) {
    inv += 1.0 / p.first;
  }
  inv /= static_cast<double>(cell.samples.size());
  return std::abs(cell.mean_xi - *cell.a_hat * inv);
}

double default_xi_threshold(const Trajectory& traj, const Parameters& params) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const SpeciesState& s : traj.snapshots) {
    const DerivedState d = to_rho_a(s, params);
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!d.vacuum[i]) {
        sum += d.xi[i] * d.xi[i];
        ++count;
      }
    }
  }
  return count == 0 ? 0.0 : 0.1 * std::sqrt(sum / static_cast<double>(count));
}

CollapseSummary collapse_summary(std::span<const CellMeasure> cells, double xi_threshold) {
  CollapseSummary out;
  std::vector<double> var;
  for (const CellMeasure& c : cells) {
    if (!c.absent() && c.mean_abs_xi > xi_threshold) {
      var.push_back(c.var_a);
    } else {
      ++out.n_masked;
    }
  }
  out.n_unmasked = var.size();
  out.median_var_a = percentile(var, 0.5);
  out.p90_var_a = percentile(std::move(var), 0.9);
  return out;
}

std::vector<CollapseSummary> dirac_collapse_metric(
    const std::vector<std::vector<CellMeasure>>& per_rung, double xi_threshold) {
  std::vector<CollapseSummary> out;
  out.reserve(per_rung.size());
  for (const auto& cells : per_rung) {
    out.push_back(collapse_summary(cells, xi_threshold));
  }
  return out;
}

namespace {

// Window means of a few cell fields on a shared physical layout.
struct WindowMeans {
  std::vector<double> m_xi;
  std::vector<double> arho_xi;
  std::vector<double> m;
  std::vector<double> a;
  std::vector<double> rho;
  std::vector<double> xi;
};

WindowMeans window_means(const Trajectory& traj, const Parameters& params, std::size_t window_t,
                         std::size_t window_x) {
  const std::size_t n_cells = traj.n_cells();
  if (n_cells % window_x != 0) {
    throw DomainError("window_x must divide the number of cells");
  }
  const std::size_t start = first_windowed_snapshot(traj, window_t);
  const std::size_t n_wt = (traj.snapshots.size() - start) / window_t;
  const std::size_t n_wx = n_cells / window_x;
  const std::size_t n_windows = n_wt * n_wx;
  WindowMeans w;
  for (auto* v : {&w.m_xi, &w.arho_xi, &w.m, &w.a, &w.rho, &w.xi}) {
    v->assign(n_windows, 0.0);
  }
  for (std::size_t j = start; j < start + n_wt * window_t; ++j) {
    const SpeciesState& s = traj.snapshots[j];
    const DerivedState d = to_rho_a(s, params);
    const std::size_t ct = (j - start) / window_t;
    for (std::size_t i = 0; i < n_cells; ++i) {
      const std::size_t k = ct * n_wx + i / window_x;
      w.m_xi[k] += s.m[i] * d.xi[i];
      w.arho_xi[k] += (s.m[i] + params.nu * s.n[i]) * d.xi[i];
      w.m[k] += s.m[i];
      w.a[k] += d.a[i];
      w.rho[k] += d.rho[i];
      w.xi[k] += d.xi[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(window_t * window_x);
  for (auto* v : {&w.m_xi, &w.arho_xi, &w.m, &w.a, &w.rho, &w.xi}) {
    for (double& x : *v) {
      x *= inv;
    }
  }
  return w;
}

double decomposition_residual(const Trajectory& traj, const Parameters& params) {
  double worst = 0.0;
  const double k = 1.0 / (params.nu - 1.0);
  for (const SpeciesState& s : traj.snapshots) {
    const DerivedState d = to_rho_a(s, params);
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d.vacuum[i]) {
        continue;
      }
      const double rx = d.rho[i] * d.xi[i];
      const double split = params.nu * k * rx - k * d.a[i] * rx;
      worst = std::max(worst, std::abs(s.m[i] * d.xi[i] - split));
    }
  }
  return worst;
}

}  // namespace

std::vector<FluxGap> flux_identification_gap(const RefinementLadder& ladder,
                                             const Parameters& params, std::size_t window_t,
                                             std::size_t window_x) {
  if (params.equal_mobility()) {
    throw DomainError("flux decomposition needs nu != 1");
  }
  check_windows(window_t, window_x);
  std::vector<FluxGap> out;
  if (ladder.rungs.empty()) {
    return out;
  }
  const std::size_t base = ladder.rungs.front().n_cells;
  const Rung& finest = ladder.rungs.back();
  const WindowMeans f =
      window_means(finest.trajectory, params, window_t, window_x * (finest.n_cells / base));
  for (const Rung& r : ladder.rungs) {
    FluxGap g;
    g.decomposition = decomposition_residual(r.trajectory, params);
    const WindowMeans w =
        window_means(r.trajectory, params, window_t, window_x * (r.n_cells / base));
    if (w.m_xi.size() != f.m_xi.size()) {
      throw DomainError("rungs do not share a window layout");
    }
    for (std::size_t k = 0; k < w.m_xi.size(); ++k) {
      g.m_flux += std::abs(w.m_xi[k] - f.m[k] * f.xi[k]);
      g.activity_flux += std::abs(w.arho_xi[k] - f.a[k] * f.rho[k] * f.xi[k]);
    }
    const double n = static_cast<double>(w.m_xi.size());
    g.m_flux /= n;
    g.activity_flux /= n;
    out.push_back(g);
  }
  return out;
}

double two_point_margin(const EntropyIndex& s, double r, double q, const Parameters& params) {
  if (!(params.alpha < r && r < q && q < params.beta)) {
    throw DomainError("two-point margin needs alpha < r < q < beta");
  }
  quadrature::GradedOptions opt;
  opt.tol = 1e-15;
  const auto dphi = [&](double u) { return phi_prime(s, u, params).value; };
  const double weighted =
      quadrature::graded([&](double u) { return dphi(u) / (u * u); }, r, q, opt).value;
  const double plain = quadrature::graded(dphi, r, q, opt).value;
  return (q - r) * weighted - plain * (1.0 / r - 1.0 / q);
}

}  // namespace crossdiff::diagnostics
