#include "relaxlim/heat_flow.hpp"

#include "relaxlim/csv.hpp"
#include "relaxlim/errors.hpp"
#include "relaxlim/field_io.hpp"

#include <cmath>
#include <stdexcept>

namespace relaxlim {

namespace {

Field nonlinearity(const Field& d) {
  return dealias(scale(squared_norm(gradient(d)), d));
}

}  // namespace

Field heat_rhs(const Field& d0) {
  return laplacian(d0) + scale(squared_norm(gradient(d0)), d0);
}

Field heat_second_time_derivative(const Field& d0) {
  const Field w = heat_rhs(d0);
  const Field grad_d = gradient(d0);
  const Field grad_w = gradient(w);
  return laplacian(w) + 2.0 * scale(gradient_dot(grad_d, grad_w), d0) +
         scale(squared_norm(grad_d), w);
}

double dirichlet_energy(const Field& d) {
  const double g = gradient_order_norm(d, 1);
  return 0.5 * g * g;
}

HeatTraceRow heat_trace_row(const HeatFlowState& s) {
  const Field& d = s.d0.field();
  return {s.t,
          dirichlet_energy(d),
          sobolev_norm(d, 1, true),
          sobolev_norm(d, 2, true),
          sobolev_norm(d, 3, true),
          constraint_report(d).max_norm_violation};
}

HeatFlowSolver::HeatFlowSolver(GridPtr grid) : grid_(std::move(grid)) {}

const HeatFlowSolver::Factors& HeatFlowSolver::factors(double dt) {
  auto it = cache_.find(dt);
  if (it != cache_.end()) return it->second;
  const Eigen::ArrayXd& k2 = grid_->k_squared();
  Factors f{(-k2 * dt).exp().cast<std::complex<double>>(),
            (-k2 * (0.5 * dt)).exp().cast<std::complex<double>>()};
  return cache_.emplace(dt, std::move(f)).first->second;
}

HeatFlowState HeatFlowSolver::step(const HeatFlowState& s, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const Factors& e = factors(dt);
  const Field& d = s.d0.field();

  const Spectrum u = forward(d);
  Spectrum half = u + (0.5 * dt) * forward(nonlinearity(d));
  half.colwise() *= e.half;
  const Field mid = inverse(grid_, half);

  Spectrum n_mid = forward(nonlinearity(mid));
  n_mid.colwise() *= e.half;
  Spectrum next = u;
  next.colwise() *= e.full;
  next += dt * n_mid;

  const Field out = inverse(grid_, next);
  const double t_next = s.t + dt;
  if (!out.all_finite()) throw DivergedError(t_next);
  return {t_next, project_to_sphere(out)};
}

HeatRun heat_solve(const DirectorField& d_in, double t_final, double dt, int stride) {
  if (!(t_final > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("t_final and dt must be positive");
  }
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");

  const long steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  HeatFlowSolver solver(d_in.grid_ptr());
  HeatRun run;
  HeatFlowState state{0.0, d_in};
  run.snapshot_steps.push_back(0);
  run.snapshots.push_back(state);
  run.trace.push_back(heat_trace_row(state));
  for (long n = 1; n <= steps; ++n) {
    const double t_target = n == steps ? t_final : static_cast<double>(n) * dt;
    state = solver.step(state, t_target - state.t);
    state.t = t_target;
    if (n % stride == 0 || n == steps) {
      run.snapshot_steps.push_back(n);
      run.snapshots.push_back(state);
      run.trace.push_back(heat_trace_row(state));
    }
  }
  return run;
}

void write_heat_trace(const std::filesystem::path& path, const HeatTrace& trace) {
  CsvWriter csv(path, "t,dirichlet_energy,h1,h2,h3,unit_violation");
  for (const auto& r : trace) {
    csv.row({r.t, r.dirichlet_energy, r.h1, r.h2, r.h3, r.unit_violation});
  }
}

void write_heat_snapshots(const std::filesystem::path& dir, const HeatRun& run) {
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    write_field(dir / ("d0_" + std::to_string(run.snapshot_steps[i]) + ".rlxf"),
                run.snapshots[i].d0.field());
  }
}

}  // namespace relaxlim
