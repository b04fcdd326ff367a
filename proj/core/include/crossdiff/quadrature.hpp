#pragma once

/// @file quadrature.hpp
/// @brief Graded composite Gauss-Legendre rule for integrands with algebraic
/// endpoint behaviour f(r) ~ C |r - endpoint|^p, p > -1.
///
/// The interval is split at its midpoint. Each half is covered by panels whose
/// widths shrink geometrically (ratio 0.5) toward its outer endpoint, each
/// panel integrated with 16-point Gauss-Legendre. Panels are added until the
/// last one contributes less than tol/10; the uncovered sliver next to the
/// endpoint is then closed with the leading-order term f(r) delta / (1 + p).
/// Nodes are placed by their distance to the nearer endpoint, so the integrand
/// can see distances far below the spacing of doubles near the endpoint.

#include <functional>

namespace crossdiff::quadrature {

struct GradedOptions {
  double tol = 1e-13;
  double ratio = 0.5;
  /// Exponent of the algebraic behaviour at each end (0 for a regular end).
  double lower_exponent = 0.0;
  double upper_exponent = 0.0;
  int max_panels_per_side = 4000;
};

struct GradedResult {
  double value = 0.0;
  int panels = 0;
  /// Magnitude of the two endpoint tail corrections that were added.
  double tail = 0.0;
};

/// 16-point Gauss-Legendre on [lo, hi].
[[nodiscard]] double gauss_legendre(const std::function<double(double)>& f, double lo, double hi);

/// f(u, v) receives u = r - lo and v = hi - r; the smaller of the two is exact.
[[nodiscard]] GradedResult graded(const std::function<double(double, double)>& f, double lo,
                                  double hi, const GradedOptions& options);

/// Same for an integrand of r, for ends where absolute positions suffice.
[[nodiscard]] GradedResult graded(const std::function<double(double)>& f, double lo, double hi,
                                  const GradedOptions& options);

}  // namespace crossdiff::quadrature
