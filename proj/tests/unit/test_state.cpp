#include "crossdiff/entropy_family.hpp"
#include "crossdiff/state.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace crossdiff;

namespace {

SpeciesState uniform_state(std::size_t n, double m, double nn) {
  SpeciesState s;
  s.m.assign(n, m);
  s.n.assign(n, nn);
  return s;
}

}  // namespace

TEST(ToRhoA, ConstantFields) {
  const auto p = Parameters::make(2.0);
  const DerivedState d = to_rho_a(uniform_state(16, 1.0, 1.0), p);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(d.rho[i], 2.0);
    EXPECT_EQ(d.a[i], 1.5);
    EXPECT_EQ(d.xi[i], 0.0);
    EXPECT_FALSE(d.vacuum[i]);
  }
}

TEST(ToRhoA, PureSpeciesEndpoints) {
  const auto p = Parameters::make(2.0);
  EXPECT_EQ(to_rho_a(uniform_state(8, 1.0, 0.0), p).a[3], 1.0);
  EXPECT_EQ(to_rho_a(uniform_state(8, 0.0, 1.0), p).a[3], 2.0);
}

TEST(ToRhoA, VacuumIsMasked) {
  const auto p = Parameters::make(2.0);
  const DerivedState d = to_rho_a(uniform_state(8, 0.0, 0.0), p);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_TRUE(d.vacuum[i]);
    EXPECT_EQ(d.a[i], p.vacuum_activity());
  }
}

TEST(ToRhoA, RejectsNegativeAndNaN) {
  const auto p = Parameters::make(2.0);
  EXPECT_THROW((void)to_rho_a(uniform_state(8, -1e-3, 1.0), p), InvalidDensity);
  EXPECT_THROW((void)to_rho_a(uniform_state(8, std::nan(""), 1.0), p), InvalidDensity);
}

TEST(FromRhoA, InverseExamples) {
  const auto p = Parameters::make(2.0);
  const std::vector<double> rho(4, 2.0);
  const std::vector<double> mid(4, 1.5);
  const SpeciesState s = from_rho_a(rho, mid, p);
  EXPECT_DOUBLE_EQ(s.m[0], 1.0);
  EXPECT_DOUBLE_EQ(s.n[0], 1.0);
  const std::vector<double> lo(4, 1.0);
  const std::vector<double> hi(4, 2.0);
  EXPECT_EQ(from_rho_a(rho, lo, p).n[1], 0.0);
  EXPECT_EQ(from_rho_a(rho, hi, p).m[1], 0.0);
}

TEST(FromRhoA, RoundTrip) {
  const auto p = Parameters::make(3.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> urho(0.1, 2.0);
  std::uniform_real_distribution<double> ua(1.0, 3.0);
  std::vector<double> rho(64);
  std::vector<double> a(64);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    rho[i] = urho(rng);
    a[i] = ua(rng);
  }
  const DerivedState d = to_rho_a(from_rho_a(rho, a, p), p);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    EXPECT_NEAR(d.rho[i], rho[i], 1e-14);
    EXPECT_NEAR(d.a[i], a[i], 1e-14);
  }
}

TEST(Degeneracy, RootsAndSign) {
  const auto p = Parameters::make(2.0);
  EXPECT_EQ(degeneracy_polynomial(1.0, p), 0.0);
  EXPECT_EQ(degeneracy_polynomial(2.0, p), 0.0);
  EXPECT_EQ(degeneracy_polynomial(1.5, p), 0.25);
  for (int k = 0; k <= 100; ++k) {
    EXPECT_GE(degeneracy_polynomial(1.0 + 0.01 * k, p), 0.0);
  }
}

TEST(Calculus, GradientAndIntegral) {
  const std::size_t n = 256;
  const Grid1D grid(n);
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = std::sin(two_pi * grid.center(i));
  }
  const auto g = periodic_gradient(f, grid.h);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err = std::max(err, std::abs(g[i] - two_pi * std::cos(two_pi * grid.center(i))));
  }
  EXPECT_LT(err, std::pow(two_pi, 3) * grid.h * grid.h / 6.0);

  const std::vector<double> ones(n, 1.0);
  EXPECT_NEAR(integrate(ones, grid.h), 1.0, 1e-15);
  for (double v : periodic_gradient(ones, grid.h)) {
    EXPECT_EQ(v, 0.0);
  }
  for (double v : periodic_laplacian(ones, grid.h)) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(Entropy, FunctionalExamples) {
  const auto p = Parameters::make(2.0);
  EXPECT_NEAR(entropy_functional(uniform_state(16, 1.0, 1.0), p), -1.5, 1e-15);
  EXPECT_EQ(entropy_functional(uniform_state(16, 0.0, 0.0), p), 0.0);
  EXPECT_NEAR(entropy_functional(uniform_state(16, std::numbers::e, 0.0), p), 0.0, 1e-14);
}

TEST(ActivityTransform, ClosedFormAndSlope) {
  const auto p = Parameters::make(2.0);
  EXPECT_NEAR(activity_transform(1.5, p), std::log(2.0), 1e-14);
  for (double delta : {1e-3, 5e-4}) {
    const double fd =
        (activity_transform(1.5 + delta, p) - activity_transform(1.5 - delta, p)) / (2 * delta);
    EXPECT_NEAR(fd, 6.0, 50.0 * delta * delta);
  }
  EXPECT_DOUBLE_EQ(activity_transform_slope(1.5, p), 6.0);
  double prev_lo = activity_transform(1.1, p);
  double prev_hi = activity_transform(1.9, p);
  for (double d : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double lo = activity_transform(1.0 + d, p);
    const double hi = activity_transform(2.0 - d, p);
    EXPECT_LT(lo, prev_lo);
    EXPECT_GT(hi, prev_hi);
    prev_lo = lo;
    prev_hi = hi;
  }
  EXPECT_LT(prev_lo, -15.0);
  EXPECT_GT(prev_hi, 15.0);
}

TEST(Parameters, Validation) {
  EXPECT_THROW((void)Parameters::make(0.0), DomainError);
  EXPECT_THROW((void)Parameters::make(2.0, -1.0), DomainError);
  const auto p = Parameters::make(0.5);
  EXPECT_EQ(p.alpha, 0.5);
  EXPECT_EQ(p.beta, 1.0);
}
