#include "crossdiff/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

namespace crossdiff::quadrature {

namespace {

using Rule = boost::math::quadrature::gauss<double, 16>;

// One half of the split interval, as a function g(d) of the distance d to its
// outer endpoint; d runs over (0, length].
double graded_side(const std::function<double(double)>& g, double length, double exponent,
                   const GradedOptions& opt, int& panels, double& tail) {
  double sum = 0.0;
  double outer = length;
  for (int j = 0; j < opt.max_panels_per_side; ++j) {
    const double inner = outer * opt.ratio;
    if (!(inner > 0.0) || !std::isnormal(inner)) {
      break;
    }
    const double contribution = gauss_legendre(g, inner, outer);
    sum += contribution;
    ++panels;
    outer = inner;
    if (std::abs(contribution) < 0.1 * opt.tol) {
      break;
    }
  }
  // Remaining sliver (0, outer]: g ~ C d^p there.
  const double probe = g(outer);
  const double sliver = std::isfinite(probe) ? probe * outer / (1.0 + exponent) : 0.0;
  tail += std::abs(sliver);
  return sum + sliver;
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sum += w[k] * (f(mid - half * x[k]) + f(mid + half * x[k]));
  }
  return half * sum;
}

GradedResult graded(const std::function<double(double, double)>& f, double lo, double hi,
                    const GradedOptions& options) {
  GradedResult result;
  if (hi == lo) {
    return result;
  }
  if (hi < lo) {
    GradedOptions swapped = options;
    std::swap(swapped.lower_exponent, swapped.upper_exponent);
    result = graded([&](double u, double v) { return f(v, u); }, hi, lo, swapped);
    result.value = -result.value;
    return result;
  }
  const double width = hi - lo;
  const double half = 0.5 * width;
  result.value += graded_side([&](double d) { return f(d, width - d); }, half,
                              options.lower_exponent, options, result.panels, result.tail);
  result.value += graded_side([&](double d) { return f(width - d, d); }, half,
                              options.upper_exponent, options, result.panels, result.tail);
  return result;
}

GradedResult graded(const std::function<double(double)>& f, double lo, double hi,
                    const GradedOptions& options) {
  return graded([&](double u, double) { return f(lo + u); }, lo, hi, options);
}

}  // namespace crossdiff::quadrature
