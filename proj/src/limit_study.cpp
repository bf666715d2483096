#include "relaxlim/limit_study.hpp"

#include "relaxlim/csv.hpp"
#include "relaxlim/errors.hpp"
#include "relaxlim/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <future>
#include <map>
#include <numbers>

namespace relaxlim {

namespace {

constexpr int kDenseLayerSamples = 40;
constexpr double kLayerSampleRatio = 1.1;
constexpr int kLayerStepsPerEps = 20;
constexpr double kLayerPhaseLength = 10.0;  // in units of eps
constexpr double kNoLayerWindow = 5.0;      // in units of eps

void update_max(double& slot, double value) {
  if (std::isnan(slot) || value > slot) slot = value;
}

void update_min(double& slot, double value) {
  if (std::isnan(slot) || value < slot) slot = value;
}

double relative_deviation(const Field& a, const Field& b) {
  const double scale = max_abs(b);
  const double diff = max_abs(a - b);
  return scale > 0.0 ? diff / scale : diff;
}

struct Probe {
  long step;
  WaveMapState wave;
  HeatFlowState heat;
};

std::string eps_label(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

}  // namespace

std::vector<Phase> step_schedule(double eps, double t_final, double dt) {
  if (!(eps > 0.0) || !(t_final > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("step_schedule needs positive eps, t_final, dt");
  }
  std::vector<Phase> phases;
  const double layer_end = std::min(kLayerPhaseLength * eps, t_final);
  const double h_layer = std::min(dt, eps / kLayerStepsPerEps);
  phases.push_back({0.0, layer_end, static_cast<long>(std::ceil(layer_end / h_layer - 1e-9))});
  if (t_final > layer_end) {
    const double rest = t_final - layer_end;
    phases.push_back({layer_end, t_final, static_cast<long>(std::ceil(rest / dt - 1e-9))});
  }
  for (auto& p : phases) p.steps = std::max(1L, p.steps);
  return phases;
}

std::vector<bool> layer_phase_samples(long steps) {
  std::vector<bool> keep(static_cast<std::size_t>(steps + 1), false);
  for (long j = 0; j <= std::min<long>(steps, kDenseLayerSamples); ++j) keep[j] = true;
  double g = kDenseLayerSamples;
  while (g < static_cast<double>(steps)) {
    g = std::ceil(g * kLayerSampleRatio);
    if (g <= static_cast<double>(steps)) keep[static_cast<std::size_t>(g)] = true;
  }
  keep[static_cast<std::size_t>(steps)] = true;
  return keep;
}

EpsRun run_single_eps(const ExperimentConfig& c, const InitialData& init, const Field& D,
                      double eps, const std::filesystem::path* snapshot_dir) {
  EpsRun out;
  out.eps = eps;
  const GridPtr& grid = init.d_in.grid_ptr();
  const bool coupled = c.run_heat && c.run_wave;
  const bool diagnostics = coupled && c.run_remainder_diagnostics;
  const double root = std::sqrt(eps);

  try {
    std::optional<HeatFlowSolver> heat_solver;
    std::optional<HeatFlowState> heat;
    std::optional<WaveMapSolver> wave_solver;
    std::optional<WaveMapState> wave;
    std::optional<WaveEnergyLedger> ledger;
    if (c.run_heat) {
      heat_solver.emplace(grid);
      heat.emplace(HeatFlowState{0.0, init.d_in});
      out.heat_energy0 = dirichlet_energy(heat->d0);
      out.max_heat_energy_increase = -std::numeric_limits<double>::infinity();
    }
    if (c.run_wave) {
      wave_solver.emplace(grid, eps);
      wave.emplace(WaveMapState{0.0, eps, init.d_in, compatible_velocity(init.d_in, init.dtilde_in)});
      ledger.emplace(*wave);
      out.wave_energy0 = ledger->initial_energy();
      out.max_balance_defect = 0.0;
    }
    double heat_energy_prev = out.heat_energy0;

    // Rows of the remainder trace still waiting for the +p probe.
    std::map<long, std::size_t> pending;

    auto record = [&](long step) {
      if (heat) out.heat_trace.push_back(heat_trace_row(*heat));
      if (wave) {
        const WaveTraceRow row = ledger->row(*wave);
        out.wave_trace.push_back(row);
        out.max_balance_defect = std::max(out.max_balance_defect, std::abs(row.balance_defect));
        out.max_unit_violation = std::max(out.max_unit_violation, row.unit_violation);
        out.max_tangency_violation = std::max(out.max_tangency_violation, row.tangency_violation);
      }
      if (snapshot_dir != nullptr) {
        const std::string tag = std::to_string(step) + ".rlxf";
        if (heat) write_field(*snapshot_dir / ("d0_" + tag), heat->d0.field());
        if (wave) {
          write_field(*snapshot_dir / ("deps_" + tag), wave->d.field());
          write_field(*snapshot_dir / ("veps_" + tag), wave->v.field());
        }
      }
      if (!coupled) return;

      const double t = wave->t;
      const Field& d0 = heat->d0.field();
      const Field w0 = heat_rhs(d0);
      const double decay = std::exp(-t / eps);
      update_max(out.sup_pos_err, l2_norm(wave->d.field() - d0 - layer_eval(D, eps, t)));
      update_max(out.sup_vel_err, l2_norm(wave->v.field() - w0 - decay * D));
      if (t <= kNoLayerWindow * eps * (1.0 + 1e-12)) {
        update_max(out.no_layer_mismatch, l2_norm(wave->v.field() - w0));
      }
      if (!diagnostics) return;

      const RemainderState r = extract_remainder(*wave, *heat, D);
      const EnergyPair ef = energies(r);
      out.energy.push_back({t, ef.E, ef.F});
      update_max(out.sup_E, ef.E);
      update_min(out.min_E, ef.E);
      update_min(out.min_F, ef.F);
      RemainderTraceRow row;
      row.t = t;
      row.E = ef.E;
      row.F = ef.F;
      row.h2_dR = sobolev_norm(r.dR, 2);
      row.h3_dR = sobolev_norm(r.dR, 3);
      row.h2_vR = sobolev_norm(r.vR, 2);
      if (out.energy.size() >= 3) row.C_fit_running = fit_C(out.energy, eps);
      if (step == 0) {
        out.E0 = ef.E;
        out.ic_dR_error = max_abs(r.dR - root * D);
        out.ic_vR_error = max_abs(r.vR);
      }
      if (c.run_decomposition_check) {
        const Field w00 = heat_second_time_derivative(d0);
        const RemainderInputs in{d0, w0, w00, D, r.dR, r.vR, eps, t};
        const Field split = eval_singular(in).total() + eval_regular(in).total();
        update_max(out.decomposition_deviation, relative_deviation(split, decomposition_oracle(in)));
      }
      pending[step] = out.remainder_trace.size();
      out.remainder_trace.push_back(row);
    };

    const std::vector<Phase> phases = step_schedule(eps, c.t_final, c.dt);
    const double probe_dt = c.probe_dt > 0.0 ? c.probe_dt : c.dt;
    long global = 0;
    record(0);

    for (std::size_t ph = 0; ph < phases.size(); ++ph) {
      const Phase& phase = phases[ph];
      const double h = phase.h();
      long p = std::max(1L, std::lround(probe_dt / h));
      if (ph == 0) p = std::min(p, std::max(1L, static_cast<long>(eps / (10.0 * h))));
      const std::vector<bool> layer_keep = ph == 0 ? layer_phase_samples(phase.steps)
                                                   : std::vector<bool>{};
      std::deque<Probe> probes;
      if (diagnostics) probes.push_back({global, *wave, *heat});
      for (auto it = pending.begin(); it != pending.end();) {
        it = it->first < global ? pending.erase(it) : std::next(it);
      }

      for (long j = 1; j <= phase.steps; ++j) {
        const double t_target = phase.time(j);
        if (heat) {
          const double step_h = t_target - heat->t;
          *heat = heat_solver->step(*heat, step_h);
          heat->t = t_target;
          const double e_now = dirichlet_energy(heat->d0);
          out.max_heat_energy_increase =
              std::max(out.max_heat_energy_increase, e_now - heat_energy_prev);
          heat_energy_prev = e_now;
        }
        if (wave) {
          const double step_h = t_target - wave->t;
          *wave = wave_solver->step(*wave, step_h);
          wave->t = t_target;
          ledger->advance(*wave, step_h);
        }
        ++global;

        const bool sampled = ph == 0 ? layer_keep[static_cast<std::size_t>(j)]
                                     : (j % c.stride == 0 || j == phase.steps);
        if (sampled) record(global);

        if (diagnostics) {
          probes.push_back({global, *wave, *heat});
          if (static_cast<long>(probes.size()) > 2 * p + 1) probes.pop_front();
          if (static_cast<long>(probes.size()) == 2 * p + 1) {
            const Probe& mid = probes[static_cast<std::size_t>(p)];
            const auto found = pending.find(mid.step);
            if (found != pending.end()) {
              std::vector<RemainderProbe> trio;
              for (const Probe* q : std::initializer_list<const Probe*>{&probes.front(), &mid, &probes.back()}) {
                trio.push_back({extract_remainder(q->wave, q->heat, D), q->heat.d0.field()});
              }
              out.remainder_trace[found->second].residual = remainder_residual(trio, D);
              pending.erase(found);
            }
          }
        }
      }
    }
    if (out.energy.size() >= 3) out.C_fit = fit_C(out.energy, eps);
  } catch (const DivergedError& e) {
    out.status = "diverged";
    out.message = e.what();
  } catch (const std::exception& e) {
    out.status = "failed";
    out.message = e.what();
  }
  return out;
}

StudyReport run_limit_study(const ExperimentConfig& c, const std::filesystem::path* snapshot_dir) {
  validate(c);
  StudyReport report;
  report.config = c;
  const GridPtr grid = make_grid(c);
  const InitialData init = make_initial_data(c, grid);
  const Field D = compute_D(init.d_in, init.dtilde_in);
  report.M = M_value(D);
  report.D_l2 = l2_norm(D);
  report.D_tangency = layer_tangency_violation(init.d_in, D);

  const auto& eps_list = c.eps_list;
  report.runs.resize(eps_list.size());
  if (c.jobs <= 1 || snapshot_dir != nullptr) {
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
      report.runs[i] = run_single_eps(c, init, D, eps_list[i], snapshot_dir);
    }
  } else {
    // Runs share only immutable inputs; results land in their own slots.
    std::size_t next = 0;
    while (next < eps_list.size()) {
      std::vector<std::pair<std::size_t, std::future<EpsRun>>> batch;
      for (int k = 0; k < c.jobs && next < eps_list.size(); ++k, ++next) {
        batch.emplace_back(next, std::async(std::launch::async, [&, eps = eps_list[next]] {
                             return run_single_eps(c, init, D, eps);
                           }));
      }
      for (auto& [i, f] : batch) report.runs[i] = f.get();
    }
  }

  reduce_study(report);

  if (init.equator_profiles && c.preset == Preset::kEquator) {
    bool default_length = true;
    for (int a = 0; a < grid->dim(); ++a) {
      default_length = default_length && std::abs(grid->length(a) - 2.0 * std::numbers::pi) < 1e-12;
    }
    if (!default_length) {
      report.scalar_note = "scalar reference needs the default 2 pi period";
    } else {
      try {
        report.scalar = scalar_limit_study(init.equator_profiles->first,
                                           init.equator_profiles->second, eps_list, c.t_final);
      } catch (const std::exception& e) {
        report.scalar_note = e.what();
      }
    }
  }
  return report;
}

void reduce_study(StudyReport& report) {
  const double T = report.config.t_final;
  double c_family = kNaN;
  for (const auto& run : report.runs) {
    if (run.status == "ok" && std::isfinite(run.C_fit)) update_max(c_family, run.C_fit);
  }
  report.C_family = c_family;
  report.T_eps_identity_ok = true;
  if (std::isfinite(c_family) && std::isfinite(report.M)) {
    report.eps0 = epsilon0(report.M, c_family, T);
    for (auto& run : report.runs) {
      run.T_eff = T_eps(report.M, c_family, T, run.eps);
      for (auto& row : run.remainder_trace) {
        try {
          row.bound_value = bound_curve(report.M, c_family, run.eps, row.t);
        } catch (const std::domain_error&) {
          row.bound_value = std::numeric_limits<double>::infinity();
        }
      }
      if (run.eps <= report.eps0) {
        if (run.T_eff != T) report.T_eps_identity_ok = false;
        if (run.status == "ok") {
          run.gronwall_checked = true;
          run.gronwall_ok = true;
          for (const auto& row : run.remainder_trace) {
            if (!(row.E <= row.bound_value)) run.gronwall_ok = false;
          }
        }
      }
    }
  }

  std::vector<RatePoint> pos;
  std::vector<RatePoint> vel;
  for (const auto& run : report.runs) {
    if (run.status != "ok" || !std::isfinite(run.sup_pos_err) || !std::isfinite(run.sup_vel_err)) {
      continue;
    }
    pos.push_back({run.eps, run.sup_pos_err});
    vel.push_back({run.eps, run.sup_vel_err});
  }
  report.fit_pos.reset();
  report.fit_vel.reset();
  if (pos.size() < 2) {
    report.fit_note = "fewer than two successful runs, no fit";
    return;
  }
  try {
    report.fit_pos = rate_fit(pos);
    report.fit_vel = rate_fit(vel);
  } catch (const std::exception& e) {
    report.fit_note = e.what();
  }
}

void write_remainder_trace(const std::filesystem::path& path,
                           const std::vector<RemainderTraceRow>& rows) {
  CsvWriter csv(path, "t,E_eps,F_eps,h2_dR,h3_dR,h2_vR,residual,C_fit_running,bound_value");
  for (const auto& r : rows) {
    csv.row({r.t, r.E, r.F, r.h2_dR, r.h3_dR, r.h2_vR, r.residual, r.C_fit_running,
             r.bound_value});
  }
}

void write_run_traces(const EpsRun& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (!run.heat_trace.empty()) write_heat_trace(dir / "heat_trace.csv", run.heat_trace);
  if (!run.wave_trace.empty()) write_wave_trace(dir / "wave_trace.csv", run.wave_trace);
  if (!run.remainder_trace.empty()) {
    write_remainder_trace(dir / "remainder_trace.csv", run.remainder_trace);
  }
}

namespace {

void write_fit(std::ostream& os, const char* name, const std::optional<RateFit>& fit) {
  os << name << ": ";
  if (!fit) {
    os << "none\n";
  } else if (fit->exact_zero) {
    os << "exact zero (all errors vanish)\n";
  } else {
    os << "slope " << format_number(fit->slope) << ", residual " << format_number(fit->residual)
       << '\n';
  }
}

}  // namespace

void emit_report(const StudyReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    CsvWriter csv(dir / "study.csv", "eps,sup_pos_err,sup_vel_err,sup_E,M,C_fit,eps0,T_eff,status");
    for (const auto& r : report.runs) {
      auto& os = csv.stream();
      os << format_number(r.eps) << ',' << format_number(r.sup_pos_err) << ','
         << format_number(r.sup_vel_err) << ',' << format_number(r.sup_E) << ','
         << format_number(report.M) << ',' << format_number(r.C_fit) << ','
         << format_number(report.eps0) << ',' << format_number(r.T_eff) << ',' << r.status
         << '\n';
    }
  }
  {
    CsvWriter csv(dir / "layer_control.csv", "eps,no_layer_mismatch,D_l2,ratio,sup_vel_err");
    for (const auto& r : report.runs) {
      csv.row({r.eps, r.no_layer_mismatch, report.D_l2, r.no_layer_mismatch / report.D_l2,
               r.sup_vel_err});
    }
  }
  if (report.scalar) {
    CsvWriter csv(dir / "scalar_rates.csv", "eps,err_pos,err_vel");
    for (const auto& r : report.scalar->rows) csv.row({r.eps, r.err_pos, r.err_vel});
    const auto& fp = report.scalar->fit_pos;
    const auto& fv = report.scalar->fit_vel;
    csv.stream() << "slope_pos,slope_vel,residual\n";
    csv.row({fp.slope, fv.slope, std::max(fp.residual, fv.residual)});
  }
  for (const auto& r : report.runs) {
    write_run_traces(r, dir / "runs" / ("eps_" + eps_label(r.eps)));
  }

  std::ofstream os(dir / "summary.txt");
  if (!os) throw std::runtime_error("cannot write summary in " + dir.string());
  const ExperimentConfig& c = report.config;
  os << "preset: " << preset_name(c.preset) << ", velocity " << velocity_mode_name(c.theta1_mode)
     << "\n";
  os << "T: " << format_number(c.t_final) << "\n";
  os << "M: " << format_number(report.M) << "\n";
  os << "|D|_L2: " << format_number(report.D_l2) << "\n";
  os << "max |d_in . D|: " << format_number(report.D_tangency) << "\n";
  os << "C_fit (family): " << format_number(report.C_family) << "\n";
  os << "eps0(M, C_fit, T): " << format_number(report.eps0) << "\n";
  if (std::isfinite(report.eps0)) {
    const double eps_c0 = std::min(report.eps0, 0.49);
    // singular at t = T when eps0 < 1/2
    double value = std::numeric_limits<double>::infinity();
    try {
      value = bound_curve(report.M, report.C_family, eps_c0, c.t_final);
    } catch (const std::domain_error&) {
    }
    os << "bound_curve(M, C_fit, eps0, T): " << format_number(value) << "\n";
  }
  os << "T_eps == T for all eps <= eps0: " << (report.T_eps_identity_ok ? "yes" : "no") << "\n";
  write_fit(os, "position rate", report.fit_pos);
  write_fit(os, "velocity rate", report.fit_vel);
  if (!report.fit_note.empty()) os << "fit note: " << report.fit_note << "\n";
  if (report.scalar) {
    write_fit(os, "scalar oracle position rate", report.scalar->fit_pos);
    write_fit(os, "scalar oracle velocity rate", report.scalar->fit_vel);
  } else if (!report.scalar_note.empty()) {
    os << "scalar oracle: " << report.scalar_note << "\n";
  }
  os << "\nper eps:\n";
  for (const auto& r : report.runs) {
    os << "eps " << format_number(r.eps) << ": " << r.status;
    if (!r.message.empty()) os << " (" << r.message << ")";
    os << "\n  E(0) " << format_number(r.E0) << ", sup E " << format_number(r.sup_E)
       << ", min E " << format_number(r.min_E) << ", min F " << format_number(r.min_F)
       << "\n  no-layer mismatch / |D|_L2 " << format_number(r.no_layer_mismatch / report.D_l2)
       << "\n  max balance defect " << format_number(r.max_balance_defect)
       << ", max heat energy increase per step " << format_number(r.max_heat_energy_increase)
       << "\n  gronwall "
       << (r.gronwall_checked ? (r.gronwall_ok ? "holds" : "violated") : "not checked (eps > eps0)")
       << "\n";
    if (!std::isnan(r.decomposition_deviation)) {
      os << "  decomposition deviation " << format_number(r.decomposition_deviation) << "\n";
    }
  }
}

std::vector<DecompositionCase> verify_decomposition(std::uint64_t seed, int n, int dim) {
  const GridPtr grid = SpectralGrid::make(dim, std::vector<int>(static_cast<std::size_t>(dim), n));
  std::mt19937_64 rng(seed);
  const int band = std::max(1, n / 8);
  Field offset = Field::sample_vector(grid, [](double, double, double) {
    return Eigen::Vector3d(0.0, 0.0, 1.0);
  });
  const Field d0 = project_to_sphere(offset + random_band_limited(grid, 3, band, 0.6, rng)).field();
  const Field D = random_band_limited(grid, 3, band, 1.0, rng);
  const Field dR = random_band_limited(grid, 3, band, 1.0, rng);
  const Field vR = random_band_limited(grid, 3, band, 1.0, rng);
  const Field w0 = heat_rhs(d0);
  const Field w00 = heat_second_time_derivative(d0);

  std::vector<DecompositionCase> out;
  for (double eps : {0.3, 0.05, 0.01}) {
    for (double t : {0.0, eps, 10.0 * eps}) {
      const RemainderInputs in{d0, w0, w00, D, dR, vR, eps, t};
      const Field split = eval_singular(in).total() + eval_regular(in).total();
      out.push_back({eps, t, relative_deviation(split, decomposition_oracle(in))});
    }
  }
  return out;
}

}  // namespace relaxlim
