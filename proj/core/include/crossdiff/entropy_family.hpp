#pragma once

/// @file entropy_family.hpp
/// @brief The activity transform X, the entropy generators phi_s, their
/// derivatives, and the flux coefficients M_s on I = [alpha, beta].
///
/// X' (a) = a / B(a) with the additive constant chosen by the caller (0 by
/// default). For s in S = (alpha/beta, beta/alpha)
///
///   phi_s(a) = int_alpha^a exp(-(s-1) X(r)) dr,
///   M_s(a)   = s a phi_s(a) + B(a) phi_s'(a),
///
/// and rho^s phi_s(a) obeys a balance law with flux M_s(a) rho^s d_x rho.
/// The integrand behaves like (r - alpha)^p (beta - r)^q with exponents known
/// in closed form, so phi_s is computed with the graded rule in quadrature.hpp.

#include "crossdiff/state.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace crossdiff {

/// An index s in the open strip S. `inside_j()` reports whether s also lies
/// in (1, beta/alpha), the range used for the compactness diagnostics.
class EntropyIndex {
public:
  /// Throws DomainError if s is not in S or if nu = 1.
  EntropyIndex(double s, const Parameters& params, double transform_constant = 0.0);

  [[nodiscard]] double value() const { return s_; }
  [[nodiscard]] bool inside_j() const { return inside_j_; }
  /// Additive constant C in X. Changing it rescales phi_s and M_s by exp(-(s-1)C).
  [[nodiscard]] double transform_constant() const { return constant_; }
  /// Exponent of the integrand at alpha: -(s-1) alpha / (beta - alpha).
  [[nodiscard]] double lower_exponent() const { return lower_; }
  /// Exponent of the integrand at beta: (s-1) beta / (beta - alpha).
  [[nodiscard]] double upper_exponent() const { return upper_; }

private:
  double s_;
  double constant_;
  double lower_;
  double upper_;
  bool inside_j_;
};

/// Open strip S = (alpha/beta, beta/alpha).
[[nodiscard]] bool in_strip(double s, const Parameters& params);

/// X(a) with C = 0. Throws DomainError unless alpha < a < beta.
[[nodiscard]] double activity_transform(double a, const Parameters& params);

/// X'(a) = a / B(a).
[[nodiscard]] double activity_transform_slope(double a, const Parameters& params);

/// phi_s(a) to absolute accuracy tol. Throws DomainError for a outside I.
[[nodiscard]] double phi(const EntropyIndex& s, double a, const Parameters& params,
                         double tol = 1e-13);

struct EndpointValue {
  double value = 0.0;
  /// True when a sat on an endpoint and `value` is the one-sided limit.
  bool at_endpoint = false;
};

/// phi_s'(a) = exp(-(s-1) X(a)) in closed form; endpoint inputs return the
/// one-sided limit (0, a finite value, or +infinity).
[[nodiscard]] EndpointValue phi_prime(const EntropyIndex& s, double a, const Parameters& params);

/// phi_s''(a) = -(s-1) X'(a) phi_s'(a), interior points only.
[[nodiscard]] double phi_second(const EntropyIndex& s, double a, const Parameters& params);

/// M_s(a) = s a phi_s(a) + B(a) phi_s'(a). The product B phi_s' is replaced by
/// its limit 0 at the endpoints.
[[nodiscard]] double flux_coefficient(const EntropyIndex& s, double a, const Parameters& params,
                                      double tol = 1e-13);

/// max |B phi'' + (s-1) a phi'| over n_probe interior points kept
/// 0.05 (beta - alpha) away from the endpoints.
[[nodiscard]] double verify_ode_residual(const EntropyIndex& s, const Parameters& params,
                                         int n_probe);

struct MIdentityResiduals {
  /// max |dM/da - (s phi + (nu + 1 - a) phi')|
  double derivative = 0.0;
  /// max |d(M/a)/da - nu phi' / a^2|
  double quotient = 0.0;
};

/// Both derivative identities for M_s checked with centred differences of
/// step delta on n_probe interior points.
[[nodiscard]] MIdentityResiduals verify_m_identities(const EntropyIndex& s,
                                                     const Parameters& params, int n_probe,
                                                     double delta = 1e-3);

/// Tabulated phi_s on Chebyshev-Lobatto nodes with cubic Hermite evaluation.
///
/// Node values are accumulated interval by interval. Each interval's Hermite
/// interpolant is checked at its midpoint during construction; intervals that
/// miss the interpolation budget (the ones hugging a singular endpoint) fall
/// back to direct quadrature from the left node.
class EntropyTable {
public:
  static constexpr int kDefaultNodes = 4096;
  static constexpr double kInterpolationBudget = 1e-8;

  EntropyTable(const EntropyIndex& s, const Parameters& params, int n_nodes = kDefaultNodes,
               double quad_tol = 1e-13);

  [[nodiscard]] const EntropyIndex& index() const { return s_; }
  [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<double>& phi_values() const { return phi_; }
  [[nodiscard]] const std::vector<double>& phi_prime_values() const { return dphi_; }
  [[nodiscard]] const std::vector<double>& flux_values() const { return flux_; }
  [[nodiscard]] double quad_tol() const { return quad_tol_; }
  /// Largest midpoint interpolation error seen on intervals kept in Hermite mode.
  [[nodiscard]] double interpolation_error() const { return interp_error_; }
  [[nodiscard]] std::size_t direct_intervals() const;

  [[nodiscard]] double phi(double a) const;
  [[nodiscard]] double phi_prime(double a) const;
  [[nodiscard]] double flux(double a) const;

  /// CSV with header `a,phi,phi_prime,M`.
  void write_csv(std::ostream& out) const;

private:
  [[nodiscard]] std::size_t locate(double a) const;

  EntropyIndex s_;
  Parameters params_;
  double quad_tol_;
  double interp_error_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> phi_;
  std::vector<double> dphi_;
  std::vector<double> flux_;
  std::vector<char> direct_;
};

/// Default diagnostic indices {1.1, 1.25, 1.5, 1.75} restricted to (1, beta/alpha).
/// When fewer than two survive, equispaced points inside the range are used.
[[nodiscard]] std::vector<EntropyIndex> default_entropy_indices(const Parameters& params);

struct SpanFit {
  /// Coefficient of the constant first, then one per entropy index.
  std::vector<double> coefficients;
  double sup_error = 0.0;
  double condition = 0.0;
  /// True when small singular values were truncated.
  bool regularized = false;
};

/// Least-squares fit of `target` (sampled at `a_grid`) by span{1, phi_s}.
[[nodiscard]] SpanFit approximate_in_span(std::span<const double> a_grid,
                                          std::span<const double> target,
                                          std::span<const EntropyIndex> indices,
                                          const Parameters& params);

}  // namespace crossdiff
