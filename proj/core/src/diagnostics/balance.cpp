#include "crossdiff/diagnostics/balance.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

namespace crossdiff::diagnostics {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sum_k c_k sin(2 pi k x + w_k t + theta_k) with its derivatives.
struct Series {
  std::vector<double> amp;
  std::vector<double> wave;
  std::vector<double> freq;
  std::vector<double> phase;

  [[nodiscard]] double value(double t, double x) const {
    double v = 0.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
      v += amp[k] * std::sin(kTwoPi * wave[k] * x + freq[k] * t + phase[k]);
    }
    return v;
  }
  [[nodiscard]] double dt(double t, double x) const {
    double v = 0.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
      v += amp[k] * freq[k] * std::cos(kTwoPi * wave[k] * x + freq[k] * t + phase[k]);
    }
    return v;
  }
  [[nodiscard]] double dx(double t, double x) const {
    double v = 0.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
      v += amp[k] * kTwoPi * wave[k] * std::cos(kTwoPi * wave[k] * x + freq[k] * t + phase[k]);
    }
    return v;
  }
  [[nodiscard]] double dxx(double t, double x) const {
    double v = 0.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
      const double kk = kTwoPi * wave[k];
      v -= amp[k] * kk * kk * std::sin(kk * x + freq[k] * t + phase[k]);
    }
    return v;
  }
};

// Amplitudes sum to `budget` in absolute value.
Series random_series(std::mt19937_64& rng, double budget) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Series s;
  constexpr int kModes = 3;
  double total = 0.0;
  for (int k = 0; k < kModes; ++k) {
    const double w = unit(rng) + 0.2;
    s.amp.push_back(unit(rng) < 0.5 ? -w : w);
    s.wave.push_back(static_cast<double>(k + 1));
    s.freq.push_back(4.0 * unit(rng) - 2.0);
    s.phase.push_back(kTwoPi * unit(rng));
    total += w;
  }
  for (double& a : s.amp) {
    a *= budget / total;
  }
  return s;
}

ManufacturedFields::Field bind(std::shared_ptr<const Series> s, double offset,
                               double (Series::*member)(double, double) const) {
  return [s, offset, member](double t, double x) { return offset + ((*s).*member)(t, x); };
}

}  // namespace

ManufacturedFields random_trigonometric_fields(const Parameters& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto rho = std::make_shared<const Series>(random_series(rng, 0.5));
  auto act = std::make_shared<const Series>(random_series(rng, 0.4 * params.width()));
  const double mid = params.vacuum_activity();
  ManufacturedFields f;
  f.rho = bind(rho, 1.0, &Series::value);
  f.rho_t = bind(rho, 0.0, &Series::dt);
  f.rho_x = bind(rho, 0.0, &Series::dx);
  f.rho_xx = bind(rho, 0.0, &Series::dxx);
  f.a = bind(act, mid, &Series::value);
  f.a_t = bind(act, 0.0, &Series::dt);
  f.a_x = bind(act, 0.0, &Series::dx);
  return f;
}

ManufacturedFields constant_activity_fields(const Parameters& params, double activity,
                                            std::uint64_t seed) {
  ManufacturedFields f = random_trigonometric_fields(params, seed);
  f.a = [activity](double, double) { return activity; };
  f.a_t = [](double, double) { return 0.0; };
  f.a_x = [](double, double) { return 0.0; };
  return f;
}

double balance_identity_oracle(const EntropyIndex& s, const Parameters& params,
                               const ManufacturedFields& fields, double delta, int n_probe) {
  constexpr double kTol = 1e-15;
  const double sv = s.value();
  const auto density = [&](double t, double x) {
    const double a = fields.a(t, x);
    if (!(a > params.alpha && a < params.beta)) {
      throw DomainError("manufactured activity touches the boundary of I");
    }
    return std::pow(fields.rho(t, x), sv) * phi(s, a, params, kTol);
  };
  const auto flux = [&](double t, double x) {
    return flux_coefficient(s, fields.a(t, x), params, kTol) * std::pow(fields.rho(t, x), sv) *
           fields.rho_x(t, x);
  };

  double worst = 0.0;
  for (int it = 0; it < n_probe; ++it) {
    const double t = 0.1 + 0.8 * static_cast<double>(it) / static_cast<double>(n_probe - 1);
    for (int ix = 0; ix < n_probe; ++ix) {
      const double x = static_cast<double>(ix) / static_cast<double>(n_probe);
      const double rho = fields.rho(t, x);
      const double rho_t = fields.rho_t(t, x);
      const double rho_x = fields.rho_x(t, x);
      const double rho_xx = fields.rho_xx(t, x);
      const double a = fields.a(t, x);
      const double a_t = fields.a_t(t, x);
      const double a_x = fields.a_x(t, x);
      if (!(a > params.alpha && a < params.beta)) {
        throw DomainError("manufactured activity touches the boundary of I");
      }
      const double p = phi(s, a, params, kTol);
      const double dp = phi_prime(s, a, params).value;
      const double m = flux_coefficient(s, a, params, kTol);

      const double u_t = (density(t + delta, x) - density(t - delta, x)) / (2.0 * delta);
      const double f_x = (flux(t, x + delta) - flux(t, x - delta)) / (2.0 * delta);
      const double source = (1.0 - sv) * m * std::pow(rho, sv - 1.0) * rho_x * rho_x;
      const double lhs = u_t - f_x - source;

      const double r_rho = rho_t - (a_x * rho * rho_x + a * rho_x * rho_x + a * rho * rho_xx);
      const double r_a = a_t - (params.nu + 1.0 - a) * rho_x * a_x -
                         degeneracy_polynomial(a, params) * (rho_xx + rho_x * rho_x / rho);
      const double rhs = sv * std::pow(rho, sv - 1.0) * p * r_rho + std::pow(rho, sv) * dp * r_a;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace crossdiff::diagnostics
