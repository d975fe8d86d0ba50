#include "dmlimits/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

namespace dmlimits {

Probability::Probability(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0))
    throw PreconditionError("probability out of [0, 1]: " + std::to_string(value));
}

Probability Probability::clamped(double value, double slack) {
  if (!(value >= -slack && value <= 1.0 + slack))
    throw PreconditionError("probability out of [0, 1]: " + std::to_string(value));
  return Probability(std::clamp(value, 0.0, 1.0));
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo < hi)) throw PreconditionError("empty or inverted interval");
}

Probability std_normal_cdf(double x) {
  if (std::isnan(x)) throw PreconditionError("std_normal_cdf of NaN");
  return Probability::clamped(0.5 * std::erfc(-x / std::numbers::sqrt2));
}

Probability two_sided_tail(double x) {
  if (std::isnan(x)) throw PreconditionError("two_sided_tail of NaN");
  return Probability::clamped(std::erfc(x / std::numbers::sqrt2));
}

Probability chi_square_cdf(double x, int n) {
  if (n < 1) throw PreconditionError("chi-square degrees of freedom must be >= 1");
  if (!(x >= 0.0)) throw PreconditionError("chi_square_cdf requires x >= 0");
  if (x == 0.0) return Probability(0.0);
  if (std::isinf(x)) return Probability(1.0);
  return Probability::clamped(boost::math::gamma_p(0.5 * n, 0.5 * x));
}

double chi_square_quantile(double p, int n) {
  if (n < 1) throw PreconditionError("chi-square degrees of freedom must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("chi_square_quantile requires 0 < p < 1");
  double hi = 3.0 * n + 10.0;
  while (chi_square_cdf(hi, n) < p) hi *= 2.0;
  auto f = [&](double x) { return chi_square_cdf(x, n) - p; };
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, 0.0, hi, -p, f(hi), tol, iterations);
  return 0.5 * (a + b);
}

double chi_square_median(int n) { return chi_square_quantile(0.5, n); }

namespace {

double or_inf(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

}  // namespace

ScalarMinimum minimize_scalar(const std::function<double(double)>& f, Interval domain, double tol,
                              Exec exec) {
  if (!(tol > 0.0)) throw PreconditionError("minimize_scalar requires tol > 0");
  const double lo = domain.lo();
  const double step = domain.width() / kMinimizeGridCells;
  auto grid_point = [&](std::size_t i) {
    return i == kMinimizeGridCells ? domain.hi() : lo + step * static_cast<double>(i);
  };
  const auto values = kernels::tabulate(
      kMinimizeGridCells + 1, [&](std::size_t i) { return or_inf(f(grid_point(i))); }, exec);
  const std::size_t i = kernels::argmin(values);
  ScalarMinimum best{grid_point(i), values[i]};

  double a = grid_point(i == 0 ? 0 : i - 1);
  double b = grid_point(std::min<std::size_t>(i + 1, kMinimizeGridCells));
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = or_inf(f(c));
  double fd = or_inf(f(d));
  auto consider = [&](double x, double fx) {
    if (fx < best.min) best = {x, fx};
  };
  consider(c, fc);
  consider(d, fd);
  for (int iter = 0; iter < 200 && b - a > tol; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = or_inf(f(c));
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = or_inf(f(d));
      consider(d, fd);
    }
  }
  return best;
}

std::int64_t floor_guarded(double x, double tol) {
  if (!(x >= 0.0 && x < 9.0e18)) throw PreconditionError("floor_guarded requires 0 <= x < 9e18");
  if (!(tol > 0.0 && tol < 0.5)) throw PreconditionError("floor_guarded requires 0 < tol < 0.5");
  const double r = std::round(x);
  if (std::abs(x - r) <= tol) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(x));
}

double power_gap(double q, double e) {
  if (e == 0.0) return 0.0;
  if (q >= 1.0) return 1.0;
  return -std::expm1(e * std::log1p(-q));
}

}  // namespace dmlimits
