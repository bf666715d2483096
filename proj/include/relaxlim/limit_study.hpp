#ifndef RELAXLIM_LIMIT_STUDY_HPP_
#define RELAXLIM_LIMIT_STUDY_HPP_

#include "relaxlim/config.hpp"
#include "relaxlim/heat_flow.hpp"
#include "relaxlim/initial_data.hpp"
#include "relaxlim/layer_remainder.hpp"
#include "relaxlim/rate_fit.hpp"
#include "relaxlim/scalar_oracle.hpp"
#include "relaxlim/wave_map.hpp"

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace relaxlim {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// A stretch of equal steps. The layer phase [0, min(10 eps, T)] uses steps
/// of at most eps / 20, the rest uses steps of at most dt.
struct Phase {
  double start = 0.0;
  double end = 0.0;
  long steps = 0;
  double h() const { return (end - start) / static_cast<double>(steps); }
  double time(long j) const { return j == steps ? end : start + static_cast<double>(j) * h(); }
};

std::vector<Phase> step_schedule(double eps, double t_final, double dt);

/// Steps of the layer phase that get sampled: all of the first 40, then
/// roughly geometric (ratio 1.1), always including the last.
std::vector<bool> layer_phase_samples(long steps);

struct RemainderTraceRow {
  double t = 0.0;
  double E = kNaN;
  double F = kNaN;
  double h2_dR = kNaN;
  double h3_dR = kNaN;
  double h2_vR = kNaN;
  double residual = kNaN;
  double C_fit_running = kNaN;
  double bound_value = kNaN;
};

struct EpsRun {
  double eps = 0.0;
  std::string status = "ok";
  std::string message;

  double sup_pos_err = kNaN;  // sup_t |d^eps - d0 - layer|_{L2}
  double sup_vel_err = kNaN;  // sup_t |v^eps - d0_t - layer_t|_{L2}
  double no_layer_mismatch = kNaN;  // sup_{t <= 5 eps} |v^eps - d0_t|_{L2}
  double sup_E = kNaN;
  double min_E = kNaN;
  double min_F = kNaN;
  double E0 = kNaN;
  double ic_dR_error = kNaN;  // max |dR(0) - sqrt(eps) D|
  double ic_vR_error = kNaN;  // max |vR(0)|
  double C_fit = kNaN;
  double decomposition_deviation = kNaN;

  double wave_energy0 = kNaN;
  double max_balance_defect = kNaN;  // max |B(t)| over samples
  double heat_energy0 = kNaN;
  double max_heat_energy_increase = kNaN;  // over every step
  double max_unit_violation = 0.0;
  double max_tangency_violation = 0.0;

  std::vector<EnergySample> energy;
  std::vector<RemainderTraceRow> remainder_trace;
  HeatTrace heat_trace;
  WaveTrace wave_trace;

  // Filled by the family reduction.
  double T_eff = kNaN;
  bool gronwall_checked = false;
  bool gronwall_ok = true;
};

/// Runs the heat flow and the wave map for one eps in lockstep and
/// evaluates errors and remainder diagnostics at the sampled steps. Solver
/// failures are caught and reported through `status`. When `snapshot_dir`
/// is set, sampled states are written as RLXF1 files there.
EpsRun run_single_eps(const ExperimentConfig& c, const InitialData& init, const Field& D,
                      double eps, const std::filesystem::path* snapshot_dir = nullptr);

struct StudyReport {
  ExperimentConfig config;
  double M = kNaN;
  double D_l2 = kNaN;
  double D_tangency = kNaN;
  double C_family = kNaN;  // max of per-run C_fit
  double eps0 = kNaN;
  bool T_eps_identity_ok = true;
  std::vector<EpsRun> runs;
  std::optional<RateFit> fit_pos;
  std::optional<RateFit> fit_vel;
  std::string fit_note;
  std::optional<ScalarRateStudy> scalar;
  std::string scalar_note;
};

/// Runs every eps of the config (concurrently when run.jobs > 1) and
/// reduces the results in eps order.
StudyReport run_limit_study(const ExperimentConfig& c,
                            const std::filesystem::path* snapshot_dir = nullptr);

/// Computes C_family, eps0, T_eff, the Gronwall check, the bound column of
/// the remainder traces and the rate fits from completed runs.
void reduce_study(StudyReport& report);

/// study.csv, layer_control.csv, scalar_rates.csv (equator preset),
/// summary.txt and per-run traces under runs/eps_<eps>/.
void emit_report(const StudyReport& report, const std::filesystem::path& dir);

/// Traces of a single run written straight into `dir`.
void write_run_traces(const EpsRun& run, const std::filesystem::path& dir);
void write_remainder_trace(const std::filesystem::path& path,
                           const std::vector<RemainderTraceRow>& rows);

struct DecompositionCase {
  double eps = 0.0;
  double t = 0.0;
  double deviation = 0.0;  // max |S + R - oracle| / max |oracle|
};

/// Evaluates S + R against decomposition_oracle on one seeded set of random
/// band-limited fields (d0 unit, D, dR, vR arbitrary) on an n^dim grid, for
/// eps in {0.3, 0.05, 0.01} and t in {0, eps, 10 eps}.
std::vector<DecompositionCase> verify_decomposition(std::uint64_t seed, int n, int dim = 2);

}  // namespace relaxlim

#endif  // RELAXLIM_LIMIT_STUDY_HPP_
