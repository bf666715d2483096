#include "relaxlim/geometry.hpp"

#include "relaxlim/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace relaxlim {

namespace {

constexpr double kDegenerateNorm = 1e-12;

void require_vector(const Field& f, const char* what) {
  if (f.components() != 3) {
    throw MismatchError(std::string(what) + " must have 3 components");
  }
}

}  // namespace

DirectorField DirectorField::checked(Field f, double tol) {
  require_vector(f, "director");
  const ConstraintReport r = constraint_report(f);
  if (!(r.max_norm_violation <= tol)) {
    throw std::invalid_argument("field is not unit length, max ||d| - 1| = " +
                                std::to_string(r.max_norm_violation));
  }
  return DirectorField(std::move(f));
}

DirectorField project_to_sphere(const Field& v) {
  require_vector(v, "projected field");
  const Eigen::ArrayXd norm = v.values().square().rowwise().sum().sqrt();
  Eigen::Index worst = 0;
  const double smallest = norm.minCoeff(&worst);
  if (!(smallest >= kDegenerateNorm)) throw DegeneratePointError(worst, smallest);
  Eigen::ArrayXXd out = v.values().colwise() / norm;
  return DirectorField(Field(v.grid_ptr(), std::move(out)));
}

TangentField project_to_tangent(const DirectorField& d, const Field& v) {
  require_vector(v, "tangent field");
  const Eigen::ArrayXd dv = (d.field().values() * v.values()).rowwise().sum();
  Eigen::ArrayXXd out = v.values() - d.field().values().colwise() * dv;
  return TangentField(Field(v.grid_ptr(), std::move(out)));
}

DirectorField lift_to_equator(const Field& theta) {
  if (theta.components() != 1) throw MismatchError("lift_to_equator expects a scalar field");
  Eigen::ArrayXXd out(theta.points(), 3);
  out.col(0) = theta.values().col(0).cos();
  out.col(1) = theta.values().col(0).sin();
  out.col(2).setZero();
  return DirectorField(Field(theta.grid_ptr(), std::move(out)));
}

ConstraintReport constraint_report(const Field& d, const Field* v) {
  ConstraintReport r;
  r.max_norm_violation = (d.values().square().rowwise().sum().sqrt() - 1.0).abs().maxCoeff();
  if (v != nullptr) {
    r.max_orthogonality_violation = (d.values() * v->values()).rowwise().sum().abs().maxCoeff();
  }
  return r;
}

}  // namespace relaxlim
