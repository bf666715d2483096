#include "relaxlim/errors.hpp"

#include <sstream>

namespace relaxlim {

namespace {

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(6);
  os << what << value;
  return os.str();
}

}  // namespace

DegeneratePointError::DegeneratePointError(Eigen::Index index, double magnitude)
    : std::runtime_error(describe(("cannot normalize near-zero vector at point " +
                                   std::to_string(index) + ", |v| = ")
                                      .c_str(),
                                  magnitude)),
      index_(index),
      magnitude_(magnitude) {}

CompatibilityError::CompatibilityError(double violation)
    : std::runtime_error(
          describe("initial data violate d . dtilde = 0, max |d . dtilde| = ", violation)),
      violation_(violation) {}

DivergedError::DivergedError(double time)
    : std::runtime_error(describe("solver diverged (non-finite values) at t = ", time)),
      time_(time) {}

}  // namespace relaxlim
