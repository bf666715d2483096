#ifndef RELAXLIM_RATE_FIT_HPP_
#define RELAXLIM_RATE_FIT_HPP_

#include <limits>
#include <vector>

namespace relaxlim {

struct RatePoint {
  double eps = 0.0;
  double error = 0.0;
};

/// Least-squares line through (log eps, log error).
struct RateFit {
  std::vector<RatePoint> points;
  /// Every error was exactly zero; slope and intercept are undefined.
  bool exact_zero = false;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  /// Root-mean-square log-space residual of the fit.
  double residual = std::numeric_limits<double>::quiet_NaN();
};

/// Needs >= 2 points with strictly decreasing eps. All-zero errors take the
/// exact-zero path; a mix of zero and positive errors is rejected.
RateFit rate_fit(std::vector<RatePoint> points);

}  // namespace relaxlim

#endif  // RELAXLIM_RATE_FIT_HPP_
