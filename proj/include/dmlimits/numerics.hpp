#pragma once

#include <cstdint>
#include <functional>

#include "dmlimits/errors.hpp"
#include "dmlimits/parallel.hpp"

namespace dmlimits {

// A real number checked to lie in [0, 1].
class Probability {
 public:
  constexpr Probability() noexcept = default;
  explicit Probability(double value);

  // Accepts values that overshoot [0, 1] by at most `slack` and clamps them.
  static Probability clamped(double value, double slack = 1e-12);

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }

 private:
  double value_ = 0.0;
};

class Interval {
 public:
  Interval(double lo, double hi);
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }

 private:
  double lo_;
  double hi_;
};

Probability std_normal_cdf(double x);

// Upper tail 2*Phi(-x), accurate for large x.
Probability two_sided_tail(double x);

Probability chi_square_cdf(double x, int n);
double chi_square_quantile(double p, int n);
double chi_square_median(int n);

struct ScalarMinimum {
  double argmin;
  double min;
};

inline constexpr int kMinimizeGridCells = 2048;

// Grid search followed by golden-section refinement around the best cell.
// Returns the best point evaluated, so jumps and kinks never push the
// result above the grid minimum. NaN values count as +inf.
ScalarMinimum minimize_scalar(const std::function<double(double)>& f, Interval domain,
                              double tol = 1e-10, Exec exec = Exec::parallel);

inline constexpr double kFloorTolerance = 1e-9;

// floor(x), except values within tol below an integer round up to it.
std::int64_t floor_guarded(double x, double tol = kFloorTolerance);

// 1 - (1 - q)^e without cancellation.
double power_gap(double q, double e);

}  // namespace dmlimits
