#ifndef RELAXLIM_GEOMETRY_HPP_
#define RELAXLIM_GEOMETRY_HPP_

#include "relaxlim/spectral.hpp"

#include <optional>

namespace relaxlim {

inline constexpr double kConstraintTolerance = 1e-8;

/// A 3-component field with |d(x)| = 1 at every grid point.
class DirectorField {
 public:
  /// Wraps `f` after checking | |f| - 1 | <= tol everywhere.
  static DirectorField checked(Field f, double tol = kConstraintTolerance);

  const Field& field() const { return field_; }
  const GridPtr& grid_ptr() const { return field_.grid_ptr(); }
  operator const Field&() const { return field_; }

 private:
  explicit DirectorField(Field f) : field_(std::move(f)) {}
  Field field_;

  friend DirectorField project_to_sphere(const Field& v);
  friend DirectorField lift_to_equator(const Field& theta);
};

/// A 3-component field orthogonal to a director at every point. The anchor
/// director is the one passed to project_to_tangent.
class TangentField {
 public:
  const Field& field() const { return field_; }
  operator const Field&() const { return field_; }

 private:
  explicit TangentField(Field f) : field_(std::move(f)) {}
  Field field_;

  friend TangentField project_to_tangent(const DirectorField& d, const Field& v);
};

/// v(x) / |v(x)|. Throws DegeneratePointError when |v| < 1e-12 somewhere.
DirectorField project_to_sphere(const Field& v);

/// v - (d . v) d pointwise.
TangentField project_to_tangent(const DirectorField& d, const Field& v);

/// (cos theta, sin theta, 0).
DirectorField lift_to_equator(const Field& theta);

struct ConstraintReport {
  double max_norm_violation = 0.0;
  double max_orthogonality_violation = 0.0;
};

ConstraintReport constraint_report(const Field& d, const Field* v = nullptr);

}  // namespace relaxlim

#endif  // RELAXLIM_GEOMETRY_HPP_
