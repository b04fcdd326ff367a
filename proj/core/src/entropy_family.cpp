#include "crossdiff/entropy_family.hpp"

#include "crossdiff/io.hpp"
#include "crossdiff/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace crossdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_distinct_mobilities(const Parameters& params) {
  if (params.equal_mobility()) {
    throw DomainError("entropy family is undefined for nu = 1 (I degenerates to a point)");
  }
}

double scale_factor(const EntropyIndex& s) {
  return std::exp(-(s.value() - 1.0) * s.transform_constant());
}

// exp(-(s-1) X(r)) written as a product of powers of r - alpha and beta - r.
double integrand_at(const EntropyIndex& s, double left, double right) {
  return scale_factor(s) * std::pow(left, s.lower_exponent()) *
         std::pow(right, s.upper_exponent());
}

double integrand(const EntropyIndex& s, double r, const Parameters& params) {
  return integrand_at(s, r - params.alpha, params.beta - r);
}

double check_activity(double a, const Parameters& params) {
  constexpr double kTol = 1e-12;
  if (!(a >= params.alpha - kTol && a <= params.beta + kTol)) {
    throw DomainError("activity " + std::to_string(a) + " outside [alpha, beta]");
  }
  return std::clamp(a, params.alpha, params.beta);
}

// int_lo^hi of the integrand, alpha <= lo <= hi <= beta.
double segment(const EntropyIndex& s, double lo, double hi, const Parameters& params, double tol) {
  if (hi <= lo) {
    return 0.0;
  }
  const auto f = [&](double r) { return integrand(s, r, params); };
  const double width = hi - lo;
  const double gap = std::min(lo - params.alpha, params.beta - hi);
  if (gap >= 2.0 * width) {
    return quadrature::gauss_legendre(f, lo, hi);
  }
  const double left0 = lo - params.alpha;
  const double right0 = params.beta - hi;
  const auto g = [&](double u, double v) { return integrand_at(s, left0 + u, right0 + v); };
  quadrature::GradedOptions opt;
  opt.tol = tol;
  opt.lower_exponent = lo == params.alpha ? s.lower_exponent() : 0.0;
  opt.upper_exponent = hi == params.beta ? s.upper_exponent() : 0.0;
  return quadrature::graded(g, lo, hi, opt).value;
}

double endpoint_limit(double exponent, double other_factor) {
  if (exponent < 0.0) {
    return kInf;
  }
  if (exponent == 0.0) {
    return other_factor;
  }
  return 0.0;
}

}  // namespace

EntropyIndex::EntropyIndex(double s, const Parameters& params, double transform_constant)
    : s_(s), constant_(transform_constant) {
  require_distinct_mobilities(params);
  if (!in_strip(s, params)) {
    throw DomainError("entropy index s = " + std::to_string(s) +
                      " outside S; the endpoint singularities are not integrable");
  }
  const double width = params.width();
  lower_ = -(s - 1.0) * params.alpha / width;
  upper_ = (s - 1.0) * params.beta / width;
  inside_j_ = s > 1.0 && s < params.beta / params.alpha;
}

bool in_strip(double s, const Parameters& params) {
  return s > params.alpha / params.beta && s < params.beta / params.alpha;
}

double activity_transform(double a, const Parameters& params) {
  require_distinct_mobilities(params);
  if (!(a > params.alpha && a < params.beta)) {
    throw DomainError("X diverges at the endpoints of I");
  }
  const double width = params.width();
  return params.alpha / width * std::log(a - params.alpha) -
         params.beta / width * std::log(params.beta - a);
}

double activity_transform_slope(double a, const Parameters& params) {
  return a / ((a - params.alpha) * (params.beta - a));
}

double phi(const EntropyIndex& s, double a, const Parameters& params, double tol) {
  a = check_activity(a, params);
  if (a == params.alpha) {
    return 0.0;
  }
  if (s.value() == 1.0) {
    return a - params.alpha;
  }
  const double right0 = params.beta - a;
  const auto g = [&](double u, double v) { return integrand_at(s, u, right0 + v); };
  quadrature::GradedOptions opt;
  opt.tol = tol;
  opt.lower_exponent = s.lower_exponent();
  opt.upper_exponent = a == params.beta ? s.upper_exponent() : 0.0;
  return quadrature::graded(g, params.alpha, a, opt).value;
}

EndpointValue phi_prime(const EntropyIndex& s, double a, const Parameters& params) {
  a = check_activity(a, params);
  const double scale = scale_factor(s);
  if (a == params.alpha) {
    const double other = scale * std::pow(params.width(), s.upper_exponent());
    return {endpoint_limit(s.lower_exponent(), other), true};
  }
  if (a == params.beta) {
    const double other = scale * std::pow(params.width(), s.lower_exponent());
    return {endpoint_limit(s.upper_exponent(), other), true};
  }
  return {integrand(s, a, params), false};
}

double phi_second(const EntropyIndex& s, double a, const Parameters& params) {
  if (!(a > params.alpha && a < params.beta)) {
    throw DomainError("phi'' is only defined in the interior of I");
  }
  return -(s.value() - 1.0) * activity_transform_slope(a, params) * integrand(s, a, params);
}

double flux_coefficient(const EntropyIndex& s, double a, const Parameters& params, double tol) {
  a = check_activity(a, params);
  const double base = s.value() * a * phi(s, a, params, tol);
  if (a == params.alpha || a == params.beta) {
    return base;
  }
  return base + degeneracy_polynomial(a, params) * integrand(s, a, params);
}

namespace {

std::vector<double> interior_probes(const Parameters& params, int n_probe) {
  const double margin = 0.05 * params.width();
  const double lo = params.alpha + margin;
  const double hi = params.beta - margin;
  std::vector<double> probes(static_cast<std::size_t>(std::max(n_probe, 1)));
  if (probes.size() == 1) {
    probes[0] = 0.5 * (lo + hi);
    return probes;
  }
  for (std::size_t j = 0; j < probes.size(); ++j) {
    probes[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(probes.size() - 1);
  }
  return probes;
}

}  // namespace

double verify_ode_residual(const EntropyIndex& s, const Parameters& params, int n_probe) {
  double worst = 0.0;
  for (double a : interior_probes(params, n_probe)) {
    const double first = phi_prime(s, a, params).value;
    const double second = phi_second(s, a, params);
    const double residual =
        degeneracy_polynomial(a, params) * second + (s.value() - 1.0) * a * first;
    worst = std::max(worst, std::abs(residual));
  }
  return worst;
}

MIdentityResiduals verify_m_identities(const EntropyIndex& s, const Parameters& params,
                                       int n_probe, double delta) {
  constexpr double kTol = 1e-15;
  MIdentityResiduals out;
  for (double a : interior_probes(params, n_probe)) {
    const double m_plus = flux_coefficient(s, a + delta, params, kTol);
    const double m_minus = flux_coefficient(s, a - delta, params, kTol);
    const double dm = (m_plus - m_minus) / (2.0 * delta);
    const double dq = (m_plus / (a + delta) - m_minus / (a - delta)) / (2.0 * delta);
    const double p = phi(s, a, params, kTol);
    const double dp = phi_prime(s, a, params).value;
    const double expected_dm = s.value() * p + (params.nu + 1.0 - a) * dp;
    const double expected_dq = params.nu / (a * a) * dp;
    out.derivative = std::max(out.derivative, std::abs(dm - expected_dm));
    out.quotient = std::max(out.quotient, std::abs(dq - expected_dq));
  }
  return out;
}

EntropyTable::EntropyTable(const EntropyIndex& s, const Parameters& params, int n_nodes,
                           double quad_tol)
    : s_(s), params_(params), quad_tol_(quad_tol) {
  if (n_nodes < 4) {
    throw DomainError("entropy table needs at least 4 nodes");
  }
  const auto count = static_cast<std::size_t>(n_nodes);
  const double mid = 0.5 * (params.alpha + params.beta);
  const double half = 0.5 * params.width();
  nodes_.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    nodes_[j] = mid - half * std::cos(std::numbers::pi * static_cast<double>(j) /
                                      static_cast<double>(count - 1));
  }
  nodes_.front() = params.alpha;
  nodes_.back() = params.beta;

  phi_.assign(count, 0.0);
  dphi_.resize(count);
  flux_.resize(count);
  direct_.assign(count - 1, 0);
  for (std::size_t j = 0; j + 1 < count; ++j) {
    phi_[j + 1] = phi_[j] + segment(s_, nodes_[j], nodes_[j + 1], params_, quad_tol_);
  }
  for (std::size_t j = 0; j < count; ++j) {
    dphi_[j] = crossdiff::phi_prime(s_, nodes_[j], params_).value;
    const bool end = j == 0 || j + 1 == count;
    flux_[j] = s_.value() * nodes_[j] * phi_[j] +
               (end ? 0.0 : degeneracy_polynomial(nodes_[j], params_) * dphi_[j]);
  }

  for (std::size_t j = 0; j + 1 < count; ++j) {
    const double w = nodes_[j + 1] - nodes_[j];
    const double d0 = dphi_[j];
    const double d1 = dphi_[j + 1];
    if (!std::isfinite(d0) || !std::isfinite(d1)) {
      direct_[j] = 1;
      continue;
    }
    // Fritsch-Carlson: exact slopes that break monotonicity are not used.
    const double secant = (phi_[j + 1] - phi_[j]) / w;
    const double r0 = d0 / secant;
    const double r1 = d1 / secant;
    if (!(secant > 0.0) || r0 * r0 + r1 * r1 > 9.0) {
      direct_[j] = 1;
      continue;
    }
    const double xm = nodes_[j] + 0.5 * w;
    const double exact = phi_[j] + segment(s_, nodes_[j], xm, params_, quad_tol_);
    const double hermite = 0.5 * (phi_[j] + phi_[j + 1]) + 0.125 * w * (d0 - d1);
    const double err = std::abs(hermite - exact);
    if (err > 0.1 * kInterpolationBudget) {
      direct_[j] = 1;
      continue;
    }
    interp_error_ = std::max(interp_error_, err);
  }
}

std::size_t EntropyTable::direct_intervals() const {
  return static_cast<std::size_t>(std::count(direct_.begin(), direct_.end(), 1));
}

std::size_t EntropyTable::locate(double a) const {
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), a);
  const auto j = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
  return std::clamp<std::size_t>(j, 1, nodes_.size() - 1) - 1;
}

double EntropyTable::phi(double a) const {
  a = check_activity(a, params_);
  if (a == params_.alpha) {
    return 0.0;
  }
  if (a == params_.beta) {
    return phi_.back();
  }
  const std::size_t j = locate(a);
  if (direct_[j]) {
    return phi_[j] + segment(s_, nodes_[j], a, params_, quad_tol_);
  }
  const double w = nodes_[j + 1] - nodes_[j];
  const double t = (a - nodes_[j]) / w;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * phi_[j] + h10 * w * dphi_[j] + h01 * phi_[j + 1] + h11 * w * dphi_[j + 1];
}

double EntropyTable::phi_prime(double a) const {
  return crossdiff::phi_prime(s_, a, params_).value;
}

double EntropyTable::flux(double a) const {
  a = check_activity(a, params_);
  const double base = s_.value() * a * phi(a);
  if (a == params_.alpha || a == params_.beta) {
    return base;
  }
  return base + degeneracy_polynomial(a, params_) * integrand(s_, a, params_);
}

void EntropyTable::write_csv(std::ostream& out) const {
  out << "a,phi,phi_prime,M\n";
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    io::write_row(out, {nodes_[j], phi_[j], dphi_[j], flux_[j]});
  }
}

std::vector<EntropyIndex> default_entropy_indices(const Parameters& params) {
  require_distinct_mobilities(params);
  const double upper = params.beta / params.alpha;
  std::vector<EntropyIndex> out;
  for (double s : {1.1, 1.25, 1.5, 1.75}) {
    if (s > 1.0 && s < upper) {
      out.emplace_back(s, params);
    }
  }
  if (out.size() < 2) {
    out.clear();
    for (double frac : {1.0 / 3.0, 2.0 / 3.0}) {
      out.emplace_back(1.0 + frac * (upper - 1.0), params);
    }
  }
  return out;
}

SpanFit approximate_in_span(std::span<const double> a_grid, std::span<const double> target,
                            std::span<const EntropyIndex> indices, const Parameters& params) {
  if (a_grid.size() != target.size() || a_grid.empty()) {
    throw DomainError("approximate_in_span needs matching, nonempty samples");
  }
  constexpr double kTol = 1e-14;
  constexpr double kTruncation = 1e-13;
  const auto rows = static_cast<Eigen::Index>(a_grid.size());
  const auto cols = static_cast<Eigen::Index>(indices.size() + 1);
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto i = static_cast<std::size_t>(r);
    design(r, 0) = 1.0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      design(r, static_cast<Eigen::Index>(k + 1)) = phi(indices[k], a_grid[i], params, kTol);
    }
    rhs(r) = target[i];
  }
  // Column equilibration before the SVD.
  Eigen::VectorXd col_scale(cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const double norm = design.col(c).lpNorm<Eigen::Infinity>();
    col_scale(c) = norm > 0.0 ? 1.0 / norm : 1.0;
  }
  const Eigen::MatrixXd scaled = design * col_scale.asDiagonal();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  SpanFit fit;
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  fit.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  fit.regularized = smin < kTruncation * smax;
  svd.setThreshold(kTruncation);
  const Eigen::VectorXd coeffs = col_scale.asDiagonal() * svd.solve(rhs);

  fit.coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
  const Eigen::VectorXd residual = design * coeffs - rhs;
  fit.sup_error = residual.lpNorm<Eigen::Infinity>();
  return fit;
}

}  // namespace crossdiff
