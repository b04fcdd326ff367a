#include "crossdiff/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace crossdiff::quadrature;

TEST(GaussLegendre, ExactForPolynomials) {
  // 16 points integrate degree 31 exactly.
  const double v = gauss_legendre([](double x) { return std::pow(x, 31); }, 0.0, 1.0);
  EXPECT_NEAR(v, 1.0 / 32.0, 1e-15);
}

TEST(Graded, InverseSquareRootSingularity) {
  GradedOptions opt;
  opt.lower_exponent = -0.5;
  const auto r = graded([](double u, double) { return 1.0 / std::sqrt(u); }, 1.0, 2.0, opt);
  EXPECT_NEAR(r.value, 2.0, 1e-13);
}

TEST(Graded, BothEndsSingular) {
  // Beta(0.3, 0.6) = Gamma(0.3) Gamma(0.6) / Gamma(0.9).
  GradedOptions opt;
  opt.lower_exponent = -0.7;
  opt.upper_exponent = -0.4;
  const auto r = graded(
      [](double u, double v) { return std::pow(u, -0.7) * std::pow(v, -0.4); }, 0.0, 1.0, opt);
  const double exact = std::tgamma(0.3) * std::tgamma(0.6) / std::tgamma(0.9);
  EXPECT_NEAR(r.value, exact, 1e-12 * exact);
}

TEST(Graded, StrongSingularityUsesTail) {
  GradedOptions opt;
  opt.lower_exponent = -0.95;
  const auto r = graded([](double u, double) { return std::pow(u, -0.95); }, 0.0, 1.0, opt);
  EXPECT_NEAR(r.value, 20.0, 1e-11);
  EXPECT_GT(r.tail, 0.0);
}

TEST(Graded, ReversedLimitsFlipSign) {
  GradedOptions opt;
  opt.upper_exponent = -0.5;
  const auto r = graded([](double, double v) { return 1.0 / std::sqrt(v); }, 1.0, 0.0, opt);
  // After swapping, the singular end is the lower limit 0 of [0, 1].
  EXPECT_NEAR(r.value, -2.0, 1e-13);
}

TEST(Graded, PlainIntegrandOverload) {
  const auto r = graded([](double x) { return x * x; }, 0.0, 3.0, GradedOptions{});
  EXPECT_NEAR(r.value, 9.0, 1e-13);
}
