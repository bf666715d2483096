#include "relaxlim/wave_map.hpp"

#include "relaxlim/csv.hpp"
#include "relaxlim/errors.hpp"
#include "relaxlim/field_io.hpp"
#include "relaxlim/scalar_oracle.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace relaxlim {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2)");
}

Field forcing(const Field& d, const Field& v, double eps) {
  return dealias(scale(wave_rhs_lambda(d, v, eps), d));
}

}  // namespace

Field wave_rhs_lambda(const Field& d, const Field& v, double eps) {
  return squared_norm(gradient(d)) - eps * squared_norm(v);
}

double wave_energy(const Field& d, const Field& v, double eps) {
  const double kinetic = l2_norm(v);
  const double grad = gradient_order_norm(d, 1);
  return 0.5 * eps * kinetic * kinetic + 0.5 * grad * grad;
}

TangentField compatible_velocity(const DirectorField& d, const Field& v) {
  const double violation = constraint_report(d.field(), &v).max_orthogonality_violation;
  if (!(violation <= kConstraintTolerance)) throw CompatibilityError(violation);
  return project_to_tangent(d, v);
}

ModeStep mode_step(double k_squared, double eps, double h) {
  ModeStep out;
  const double k = std::sqrt(k_squared);
  const auto unit_value = damped_mode(ScalarModeIC<double>{k, 1.0, 0.0, eps}, h);
  const auto unit_velocity = damped_mode(ScalarModeIC<double>{k, 0.0, 1.0, eps}, h);
  out.propagator << unit_value.value, unit_velocity.value, unit_value.velocity,
      unit_velocity.velocity;

  // exp of [[hA, hb, 0], [0, 0, 1], [0, 0, 0]] carries h phi1(hA) b and
  // h phi2(hA) b in its last two columns.
  // Evaluated in long double: the block is stiff when h >> eps.
  using Matrix4l = Eigen::Matrix<long double, 4, 4>;
  const long double hl = h;
  const long double el = eps;
  Matrix4l m = Matrix4l::Zero();
  m(0, 1) = hl;
  m(1, 0) = -hl * static_cast<long double>(k_squared) / el;
  m(1, 1) = -hl / el;
  m(1, 2) = hl / el;
  m(2, 3) = 1.0L;
  const Eigen::Matrix4d e = Matrix4l(m.exp()).cast<double>();
  out.phi1 = e.block<2, 1>(0, 2);
  out.phi2 = e.block<2, 1>(0, 3);
  return out;
}

WaveMapSolver::WaveMapSolver(GridPtr grid, double eps) : grid_(std::move(grid)), eps_(eps) {
  check_eps(eps);
}

const WaveMapSolver::Tables& WaveMapSolver::tables(double dt) {
  auto it = cache_.find(dt);
  if (it != cache_.end()) return it->second;

  const Eigen::ArrayXd& k2 = grid_->k_squared();
  const Eigen::Index n = k2.size();
  Tables t;
  for (auto* a : {&t.p00, &t.p01, &t.p10, &t.p11, &t.a1d, &t.a1v, &t.a2d, &t.a2v}) {
    a->resize(n);
  }
  std::map<double, ModeStep> by_wavenumber;
  for (Eigen::Index i = 0; i < n; ++i) {
    auto found = by_wavenumber.find(k2(i));
    if (found == by_wavenumber.end()) {
      found = by_wavenumber.emplace(k2(i), mode_step(k2(i), eps_, dt)).first;
    }
    const ModeStep& m = found->second;
    t.p00(i) = m.propagator(0, 0);
    t.p01(i) = m.propagator(0, 1);
    t.p10(i) = m.propagator(1, 0);
    t.p11(i) = m.propagator(1, 1);
    t.a1d(i) = m.phi1(0);
    t.a1v(i) = m.phi1(1);
    t.a2d(i) = m.phi2(0);
    t.a2v(i) = m.phi2(1);
  }
  return cache_.emplace(dt, std::move(t)).first->second;
}

WaveMapState WaveMapSolver::step(const WaveMapState& s, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const Tables& tb = tables(dt);
  using C = std::complex<double>;
  const auto cplx = [](const Eigen::ArrayXd& a) { return a.cast<C>(); };

  const Field& d = s.d.field();
  const Field& v = s.v.field();
  const Spectrum dh = forward(d);
  const Spectrum vh = forward(v);
  const Spectrum f0 = forward(forcing(d, v, eps_));

  Spectrum pd = dh.colwise() * cplx(tb.p00) + vh.colwise() * cplx(tb.p01) +
                f0.colwise() * cplx(tb.a1d);
  Spectrum pv = dh.colwise() * cplx(tb.p10) + vh.colwise() * cplx(tb.p11) +
                f0.colwise() * cplx(tb.a1v);

  const Field predicted_d = inverse(grid_, pd);
  const Field predicted_v = inverse(grid_, pv);
  const Spectrum df = forward(forcing(predicted_d, predicted_v, eps_)) - f0;
  pd += df.colwise() * cplx(tb.a2d);
  pv += df.colwise() * cplx(tb.a2v);

  const Field next_d = inverse(grid_, pd);
  const Field next_v = inverse(grid_, pv);
  const double t_next = s.t + dt;
  if (!next_d.all_finite() || !next_v.all_finite()) throw DivergedError(t_next);
  DirectorField director = project_to_sphere(next_d);
  TangentField velocity = project_to_tangent(director, next_v);
  return {t_next, eps_, std::move(director), std::move(velocity)};
}

WaveEnergyLedger::WaveEnergyLedger(const WaveMapState& initial)
    : w0_(wave_energy(initial.d, initial.v, initial.eps)),
      v_sq_prev_(std::pow(l2_norm(initial.v), 2)) {}

void WaveEnergyLedger::advance(const WaveMapState& s, double h) {
  const double v_sq = std::pow(l2_norm(s.v), 2);
  dissipated_ += 0.5 * h * (v_sq_prev_ + v_sq);
  v_sq_prev_ = v_sq;
}

WaveTraceRow WaveEnergyLedger::row(const WaveMapState& s) const {
  const ConstraintReport c = constraint_report(s.d.field(), &s.v.field());
  const double w = wave_energy(s.d, s.v, s.eps);
  return {s.t, w, dissipated_, w - w0_ + dissipated_, c.max_norm_violation,
          c.max_orthogonality_violation};
}

WaveRun wave_solve(const DirectorField& d_in, const Field& dtilde_in, double eps, double t_final,
                   double dt, int stride) {
  check_eps(eps);
  if (!(t_final > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("t_final and dt must be positive");
  }
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");

  WaveMapSolver solver(d_in.grid_ptr(), eps);
  WaveMapState state{0.0, eps, d_in, compatible_velocity(d_in, dtilde_in)};
  WaveEnergyLedger ledger(state);

  WaveRun run;
  auto record = [&](long n) {
    run.snapshot_steps.push_back(n);
    run.snapshots.push_back(state);
    run.trace.push_back(ledger.row(state));
  };
  record(0);

  const long steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  for (long n = 1; n <= steps; ++n) {
    const double t_target = n == steps ? t_final : static_cast<double>(n) * dt;
    const double h = t_target - state.t;
    state = solver.step(state, h);
    state.t = t_target;
    ledger.advance(state, h);
    if (n % stride == 0 || n == steps) record(n);
  }
  return run;
}

void write_wave_trace(const std::filesystem::path& path, const WaveTrace& trace) {
  CsvWriter csv(path, "t,W,dissipated,balance_defect,unit_violation,tangency_violation");
  for (const auto& r : trace) {
    csv.row({r.t, r.W, r.dissipated, r.balance_defect, r.unit_violation, r.tangency_violation});
  }
}

void write_wave_snapshots(const std::filesystem::path& dir, const WaveRun& run) {
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const std::string step = std::to_string(run.snapshot_steps[i]);
    write_field(dir / ("deps_" + step + ".rlxf"), run.snapshots[i].d.field());
    write_field(dir / ("veps_" + step + ".rlxf"), run.snapshots[i].v.field());
  }
}

}  // namespace relaxlim
