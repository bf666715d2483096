#ifndef RELAXLIM_ERRORS_HPP_
#define RELAXLIM_ERRORS_HPP_

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace relaxlim {

/// A point where a vector is too short to normalize.
class DegeneratePointError : public std::runtime_error {
 public:
  DegeneratePointError(Eigen::Index index, double magnitude);
  Eigen::Index index() const { return index_; }
  double magnitude() const { return magnitude_; }

 private:
  Eigen::Index index_;
  double magnitude_;
};

/// Initial position and velocity are not orthogonal pointwise.
class CompatibilityError : public std::runtime_error {
 public:
  explicit CompatibilityError(double violation);
  double violation() const { return violation_; }

 private:
  double violation_;
};

/// A solver produced non-finite values.
class DivergedError : public std::runtime_error {
 public:
  explicit DivergedError(double time);
  double time() const { return time_; }

 private:
  double time_;
};

/// Two fields that must share a grid or a time stamp do not.
class MismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace relaxlim

#endif  // RELAXLIM_ERRORS_HPP_
