#include "relaxlim/rate_fit.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace relaxlim {

RateFit rate_fit(std::vector<RatePoint> points) {
  if (points.size() < 2) throw std::invalid_argument("rate fit needs at least two points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.eps > 0.0) || !std::isfinite(p.eps)) {
      throw std::invalid_argument("rate fit: eps values must be positive and finite");
    }
    if (!std::isfinite(p.error) || p.error < 0.0) {
      throw std::invalid_argument("rate fit: errors must be finite and nonnegative");
    }
    if (i > 0 && !(p.eps < points[i - 1].eps)) {
      throw std::invalid_argument("rate fit: eps values must be strictly decreasing");
    }
  }

  RateFit fit;
  fit.points = std::move(points);
  std::size_t zeros = 0;
  for (const auto& p : fit.points) zeros += (p.error == 0.0);
  if (zeros == fit.points.size()) {
    fit.exact_zero = true;
    return fit;
  }
  if (zeros > 0) {
    throw std::invalid_argument("rate fit: some but not all errors are zero");
  }

  const auto n = static_cast<Eigen::Index>(fit.points.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = std::log(fit.points[i].eps);
    design(i, 1) = 1.0;
    rhs(i) = std::log(fit.points[i].error);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  fit.slope = coef(0);
  fit.intercept = coef(1);
  fit.residual = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(n));
  return fit;
}

}  // namespace relaxlim
