#include "relaxlim/initial_data.hpp"

#include "relaxlim/heat_flow.hpp"

#include <cmath>
#include <numbers>

namespace relaxlim {

GridPtr make_grid(const ExperimentConfig& c) { return SpectralGrid::make(c.dim, c.n, c.length); }

InitialData make_initial_data(const ExperimentConfig& c, const GridPtr& grid) {
  using Eigen::Vector3d;
  const double two_pi = 2.0 * std::numbers::pi;
  const double sx = two_pi / grid->length(0);
  const double sy = grid->dim() > 1 ? two_pi / grid->length(1) : 1.0;

  switch (c.preset) {
    case Preset::kConstant: {
      DirectorField d = DirectorField::checked(
          Field::sample_vector(grid, [](double, double, double) { return Vector3d(0, 0, 1); }));
      return {std::move(d), Field(grid, 3), std::nullopt};
    }

    case Preset::kEquator: {
      const int m = c.theta0_wavenumber;
      const double a = c.theta0_amplitude;
      double b = 0.0;
      switch (c.theta1_mode) {
        case VelocityMode::kExplicit: b = c.theta1_amplitude; break;
        case VelocityMode::kWellPrepared: b = -static_cast<double>(m * m) * a; break;
        case VelocityMode::kZero: b = 0.0; break;
      }
      const Field theta0 = Field::sample(
          grid, [&](double x, double, double) { return a * std::sin(m * sx * x); });
      DirectorField d = lift_to_equator(theta0);
      Field dtilde = Field::sample_vector(grid, [&](double x, double, double) -> Vector3d {
        const double th = a * std::sin(m * sx * x);
        return Vector3d(-std::sin(th), std::cos(th), 0.0) * (b * std::sin(m * sx * x));
      });
      std::vector<SineMode> p0{{m, a}};
      std::vector<SineMode> p1{{m, b}};
      return {std::move(d), std::move(dtilde), std::make_pair(p0, p1)};
    }

    case Preset::kTwisted: {
      const double ta = c.twist_a;
      const double tb = c.twist_b;
      DirectorField d = project_to_sphere(Field::sample_vector(grid, [&](double x, double y, double) {
        const double p = ta * std::sin(sx * x);
        const double q = tb * std::sin(sy * y);
        return Vector3d(std::cos(p) * std::cos(q), std::cos(p) * std::sin(q), std::sin(p));
      }));
      Field raw(grid, 3);
      switch (c.theta1_mode) {
        case VelocityMode::kExplicit: {
          std::mt19937_64 rng(c.seed);
          std::uniform_real_distribution<double> phase(0.0, two_pi);
          const double p1 = phase(rng), p2 = phase(rng), p3 = phase(rng);
          const int m = std::max(1, c.theta0_wavenumber);
          const double amp = c.theta1_amplitude;
          raw = Field::sample_vector(grid, [&](double x, double y, double) -> Vector3d {
            return Vector3d(std::sin(m * sx * x + p1), std::cos(m * sy * y + p2),
                            std::sin(m * (sx * x + sy * y) + p3)) *
                   amp;
          });
          break;
        }
        case VelocityMode::kWellPrepared: raw = heat_rhs(d.field()); break;
        case VelocityMode::kZero: break;
      }
      Field dtilde = project_to_tangent(d, raw).field();
      return {std::move(d), std::move(dtilde), std::nullopt};
    }
  }
  throw ConfigError("unknown preset");
}

Field random_band_limited(const GridPtr& grid, int components, int max_mode, double amplitude,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Spectrum s = Spectrum::Zero(grid->size(), components);
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    bool inside = true;
    for (int a = 0; a < grid->dim(); ++a) inside = inside && std::abs(grid->mode(i, a)) <= max_mode;
    if (!inside) continue;
    for (int c = 0; c < components; ++c) {
      const double re = coeff(rng);
      const double im = coeff(rng);
      s(i, c) = std::complex<double>(re, im);
    }
  }
  Field f = inverse(grid, s);
  const double peak = max_abs(f);
  return peak > 0.0 ? (amplitude / peak) * f : f;
}

}  // namespace relaxlim
