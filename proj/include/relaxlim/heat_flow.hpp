#ifndef RELAXLIM_HEAT_FLOW_HPP_
#define RELAXLIM_HEAT_FLOW_HPP_

#include "relaxlim/geometry.hpp"

#include <filesystem>
#include <map>
#include <vector>

namespace relaxlim {

struct HeatFlowState {
  double t = 0.0;
  DirectorField d0;
};

/// Delta d + |grad d|^2 d, the heat-flow velocity.
Field heat_rhs(const Field& d0);

/// Time derivative of heat_rhs along the flow:
/// Delta w + 2 (grad d : grad w) d + |grad d|^2 w with w = heat_rhs(d).
Field heat_second_time_derivative(const Field& d0);

/// 1/2 |grad d|^2_{L^2}.
double dirichlet_energy(const Field& d);

struct HeatTraceRow {
  double t = 0.0;
  double dirichlet_energy = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
  double unit_violation = 0.0;
};
using HeatTrace = std::vector<HeatTraceRow>;

HeatTraceRow heat_trace_row(const HeatFlowState& s);

/// Integrating-factor midpoint stepper. Delta is propagated exactly per mode,
/// the (dealiased) nonlinearity |grad d|^2 d is explicit, and the result is
/// renormalized onto the sphere.
class HeatFlowSolver {
 public:
  explicit HeatFlowSolver(GridPtr grid);

  /// Throws DivergedError on non-finite output.
  HeatFlowState step(const HeatFlowState& s, double dt);

 private:
  struct Factors {
    Eigen::ArrayXcd full;
    Eigen::ArrayXcd half;
  };
  const Factors& factors(double dt);

  GridPtr grid_;
  std::map<double, Factors> cache_;
};

struct HeatRun {
  std::vector<long> snapshot_steps;
  std::vector<HeatFlowState> snapshots;
  HeatTrace trace;
};

/// Integrates to t_final with step dt (the last step is shortened to land
/// on t_final). Snapshots and trace rows every `stride` steps and at the end.
HeatRun heat_solve(const DirectorField& d_in, double t_final, double dt, int stride);

void write_heat_trace(const std::filesystem::path& path, const HeatTrace& trace);
/// Writes d0_<step>.rlxf for every snapshot.
void write_heat_snapshots(const std::filesystem::path& dir, const HeatRun& run);

}  // namespace relaxlim

#endif  // RELAXLIM_HEAT_FLOW_HPP_
