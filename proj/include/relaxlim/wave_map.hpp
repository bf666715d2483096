#ifndef RELAXLIM_WAVE_MAP_HPP_
#define RELAXLIM_WAVE_MAP_HPP_

#include "relaxlim/geometry.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <vector>

namespace relaxlim {

struct WaveMapState {
  double t = 0.0;
  double eps = 0.0;
  DirectorField d;
  TangentField v;  // time derivative of d
};

/// |grad d|^2 - eps |v|^2, the multiplier keeping d on the sphere.
Field wave_rhs_lambda(const Field& d, const Field& v, double eps);

/// (eps/2) |v|^2_{L^2} + 1/2 |grad d|^2_{L^2}.
double wave_energy(const Field& d, const Field& v, double eps);

/// Checks max |d . v| <= 1e-8 and returns v projected onto the tangent space.
/// Throws CompatibilityError otherwise.
TangentField compatible_velocity(const DirectorField& d, const Field& v);

/// Per-mode data of one exponential step of  eps w'' + w' + k^2 w = f.
///   [w, w'](h) = propagator * [w, w'](0) + phi1 * f0 + phi2 * (f1 - f0)
/// for forcing interpolated linearly from f0 (start) to f1 (end).
struct ModeStep {
  Eigen::Matrix2d propagator;
  Eigen::Vector2d phi1;
  Eigen::Vector2d phi2;
};

/// The homogeneous part comes from the damped_mode closed form, the forcing
/// weights from an augmented matrix exponential.
ModeStep mode_step(double k_squared, double eps, double h);

/// ETD2 (exponential Runge-Kutta, two stages) stepper for
///   eps dv/dt = -v + Delta d + lambda d,  dd/dt = v,
/// with the linear part propagated exactly per mode and the (dealiased)
/// forcing lambda d treated explicitly. After the step d is renormalized and
/// v projected to the tangent space.
class WaveMapSolver {
 public:
  WaveMapSolver(GridPtr grid, double eps);

  double eps() const { return eps_; }

  /// Throws DivergedError on non-finite output.
  WaveMapState step(const WaveMapState& s, double dt);

 private:
  struct Tables {
    Eigen::ArrayXd p00, p01, p10, p11;
    Eigen::ArrayXd a1d, a1v, a2d, a2v;
  };
  const Tables& tables(double dt);

  GridPtr grid_;
  double eps_;
  std::map<double, Tables> cache_;
};

struct WaveTraceRow {
  double t = 0.0;
  double W = 0.0;
  double dissipated = 0.0;
  double balance_defect = 0.0;
  double unit_violation = 0.0;
  double tangency_violation = 0.0;
};
using WaveTrace = std::vector<WaveTraceRow>;

/// Running dissipation integral and balance defect for a wave-map run.
/// Feed every step (not just recorded ones) so the quadrature sees them all.
class WaveEnergyLedger {
 public:
  explicit WaveEnergyLedger(const WaveMapState& initial);

  /// Account for the step of length h that produced `s`.
  void advance(const WaveMapState& s, double h);
  WaveTraceRow row(const WaveMapState& s) const;
  double initial_energy() const { return w0_; }

 private:
  double w0_;
  double dissipated_ = 0.0;
  double v_sq_prev_;
};

struct WaveRun {
  std::vector<long> snapshot_steps;
  std::vector<WaveMapState> snapshots;
  WaveTrace trace;
};

/// Requires eps in (0, 1/2) and compatible data. The dissipation integral of
/// |v|^2 uses the trapezoid rule over every step; trace rows and snapshots
/// are taken every `stride` steps and at the end.
WaveRun wave_solve(const DirectorField& d_in, const Field& dtilde_in, double eps, double t_final,
                   double dt, int stride);

void write_wave_trace(const std::filesystem::path& path, const WaveTrace& trace);
/// Writes deps_<step>.rlxf and veps_<step>.rlxf for every snapshot.
void write_wave_snapshots(const std::filesystem::path& dir, const WaveRun& run);

}  // namespace relaxlim

#endif  // RELAXLIM_WAVE_MAP_HPP_
