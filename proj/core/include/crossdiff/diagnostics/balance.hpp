#pragma once

/// @file balance.hpp
/// @brief Manufactured-field oracle for the entropy balance law.
///
/// For any smooth rho > 0 and a in the interior of I, with U = rho^s phi_s(a)
/// and F = M_s(a) rho^s d_x rho,
///
///   d_t U - d_x F - (1-s) M_s rho^{s-1} (d_x rho)^2
///       = s rho^{s-1} phi_s r_rho + rho^s phi_s' r_a,
///
/// where r_rho = d_t rho - d_x(a rho d_x rho) and
/// r_a = d_t a - (nu+1-a) d_x rho d_x a - B(a)(d_xx rho + (d_x rho)^2/rho).
/// The left side is evaluated with centred differences of step delta, the
/// right side from analytic derivatives, so the defect is O(delta^2).

#include "crossdiff/entropy_family.hpp"

#include <cstdint>
#include <functional>

namespace crossdiff::diagnostics {

/// Space-time fields with analytic first derivatives (and d_xx rho).
struct ManufacturedFields {
  using Field = std::function<double(double t, double x)>;
  Field rho;
  Field rho_t;
  Field rho_x;
  Field rho_xx;
  Field a;
  Field a_t;
  Field a_x;
};

/// Random trigonometric rho in [0.5, 1.5] and a within the middle 80% of I.
[[nodiscard]] ManufacturedFields random_trigonometric_fields(const Parameters& params,
                                                             std::uint64_t seed);

/// a frozen at `activity`, rho as in random_trigonometric_fields.
[[nodiscard]] ManufacturedFields constant_activity_fields(const Parameters& params,
                                                          double activity, std::uint64_t seed);

/// Max pointwise defect of the identity over an n_probe x n_probe grid in
/// (t, x) in [0.1, 0.9] x [0, 1). Throws DomainError if a touches the boundary of I.
[[nodiscard]] double balance_identity_oracle(const EntropyIndex& s, const Parameters& params,
                                             const ManufacturedFields& fields, double delta,
                                             int n_probe = 8);

}  // namespace crossdiff::diagnostics
