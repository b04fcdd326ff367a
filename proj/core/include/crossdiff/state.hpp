#pragma once

/// @file state.hpp
/// @brief Periodic grid, species fields and the (rho, a) change of variables.
///
/// The two species m and n live on the unit torus as cell averages. Most of
/// the structure of the system is easier to see in the total density
/// rho = m + n and the activity a = (m + nu n) / rho, which takes values in
/// the interval I = [alpha, beta] with alpha = min(1, nu), beta = max(1, nu).

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace crossdiff {

/// Raised when an input leaves the domain where an operation is defined
/// (negative densities, activity outside I, entropy index outside S, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A species field holds a negative or non-finite value.
class InvalidDensity : public DomainError {
public:
  using DomainError::DomainError;
};

/// Raised for malformed or unknown configuration (scenario names, keys).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Physical and numerical constants shared by every module.
struct Parameters {
  double nu = 2.0;
  double alpha = 1.0;
  double beta = 2.0;
  double epsilon = 0.0;
  double t_final = 0.0;
  double rho_floor = 1e-10;

  /// Validates and fills alpha/beta. nu = 1 is accepted (the solver handles
  /// the equal-mobility case) but every entropy-family routine rejects it.
  static Parameters make(double nu, double epsilon = 0.0, double t_final = 0.0,
                         double rho_floor = 1e-10);

  [[nodiscard]] bool equal_mobility() const { return nu == 1.0; }
  [[nodiscard]] double width() const { return beta - alpha; }
  [[nodiscard]] double vacuum_activity() const { return 0.5 * (alpha + beta); }
};

struct Grid1D {
  std::size_t n_cells = 0;
  double h = 0.0;

  explicit Grid1D(std::size_t cells);
  Grid1D() = default;

  [[nodiscard]] double center(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) * h;
  }
  [[nodiscard]] std::size_t next(std::size_t i) const { return i + 1 == n_cells ? 0 : i + 1; }
  [[nodiscard]] std::size_t prev(std::size_t i) const { return i == 0 ? n_cells - 1 : i - 1; }
};

/// Cell averages of both species at one time.
struct SpeciesState {
  double t = 0.0;
  std::vector<double> m;
  std::vector<double> n;

  [[nodiscard]] std::size_t size() const { return m.size(); }
  [[nodiscard]] double h() const { return 1.0 / static_cast<double>(m.size()); }
};

struct DerivedState {
  std::vector<double> rho;
  std::vector<double> a;
  /// Cell-centred (rho_{i+1} - rho_{i-1}) / 2h.
  std::vector<double> xi;
  std::vector<char> vacuum;
  /// Largest amount by which a had to be clamped back into I.
  double clamp_magnitude = 0.0;

  [[nodiscard]] std::size_t size() const { return rho.size(); }
};

/// Throws DomainError when a field is negative or not finite.
void require_nonnegative(const SpeciesState& state);

[[nodiscard]] DerivedState to_rho_a(const SpeciesState& state, const Parameters& params);

/// Inverse map m = rho (nu - a)/(nu - 1), n = rho (a - 1)/(nu - 1).
[[nodiscard]] SpeciesState from_rho_a(std::span<const double> rho, std::span<const double> a,
                                      const Parameters& params, double t = 0.0);

/// B(a) = (a - 1)(nu - a), nonnegative on I and zero at both pure states.
[[nodiscard]] inline double degeneracy_polynomial(double a, const Parameters& params) {
  return (a - 1.0) * (params.nu - a);
}

[[nodiscard]] std::vector<double> periodic_gradient(std::span<const double> f, double h);
[[nodiscard]] std::vector<double> periodic_laplacian(std::span<const double> f, double h);
[[nodiscard]] double integrate(std::span<const double> f, double h);

/// h(z) = z log z - z with h(0) = 0.
[[nodiscard]] double entropy_density(double z);

/// H(m, n) = integral of h(m) + h(n)/nu.
[[nodiscard]] double entropy_functional(const SpeciesState& state, const Parameters& params);

}  // namespace crossdiff
