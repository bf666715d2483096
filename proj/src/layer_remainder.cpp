#include "relaxlim/layer_remainder.hpp"

#include "relaxlim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relaxlim {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2)");
}

double squared(double x) { return x * x; }
double h2(const Field& f) { return sobolev_norm(f, 2); }
double grad_h2(const Field& f) { return sobolev_norm(f, 3, true); }

}  // namespace

Field compute_D(const DirectorField& d_in, const Field& dtilde_in) {
  const double violation = constraint_report(d_in.field(), &dtilde_in).max_orthogonality_violation;
  if (!(violation <= kConstraintTolerance)) throw CompatibilityError(violation);
  return dtilde_in - heat_rhs(d_in.field());
}

double layer_tangency_violation(const DirectorField& d_in, const Field& D) {
  return constraint_report(d_in.field(), &D).max_orthogonality_violation;
}

Field layer_eval(const Field& D, double eps, double t) {
  return (-eps * std::exp(-t / eps)) * D;
}

Field layer_time_derivative(const Field& D, double eps, double t) {
  return std::exp(-t / eps) * D;
}

RemainderState extract_remainder(const WaveMapState& wave, const HeatFlowState& heat,
                                 const Field& D) {
  if (!wave.d.field().grid().same_shape(heat.d0.field().grid()) ||
      !wave.d.field().grid().same_shape(D.grid())) {
    throw MismatchError("wave, heat and layer data live on different grids");
  }
  if (std::abs(wave.t - heat.t) > 1e-12 * std::max(1.0, std::abs(wave.t))) {
    throw MismatchError("wave and heat states are at different times");
  }
  const double eps = wave.eps;
  const double t = wave.t;
  const double inv_root = 1.0 / std::sqrt(eps);
  const Field& d0 = heat.d0.field();
  Field dR = inv_root * (wave.d.field() - d0 - layer_eval(D, eps, t));
  Field vR = inv_root * (wave.v.field() - heat_rhs(d0) - layer_time_derivative(D, eps, t));
  return {t, eps, std::move(dR), std::move(vR)};
}

double energy_E(const RemainderState& r) {
  check_eps(r.eps);
  const double e = r.eps;
  return squared(h2(r.vR)) + (1.0 / e - 1.0) * squared(h2(r.dR)) +
         (2.0 / e) * squared(grad_h2(r.dR)) + squared(h2(r.vR + r.dR));
}

double energy_F(const RemainderState& r) {
  check_eps(r.eps);
  const double e = r.eps;
  return (1.0 / e - 0.5) * squared(h2(r.vR)) + (0.5 / e) * squared(grad_h2(r.dR));
}

EnergyPair energies(const RemainderState& r) { return {energy_E(r), energy_F(r)}; }

double M_value(const Field& D) { return squared(h2(D)) + 2.0 * squared(grad_h2(D)); }

double bound_curve(double M, double C, double eps, double t) {
  check_eps(eps);
  if (!(M >= 0.0) || !(C >= 0.0) || !(t >= 0.0)) {
    throw std::invalid_argument("bound_curve needs M >= 0, C >= 0, t >= 0");
  }
  const double growth = std::exp(C * t);
  const double denominator = 1.0 + eps * M - eps * (1.0 + M) * growth;
  if (!(denominator > 0.0)) throw std::domain_error("bound_curve evaluated at t >= T_eps");
  return 2.0 * M * growth / denominator;
}

double epsilon0(double M, double C, double T) {
  if (!(M >= 0.0) || !(C >= 0.0) || !(T > 0.0)) {
    throw std::invalid_argument("epsilon0 needs M >= 0, C >= 0, T > 0");
  }
  return std::min(0.5, 1.0 / ((1.0 + M) * std::exp(C * T) - M));
}

double T_eps(double M, double C, double T, double eps) {
  check_eps(eps);
  if (eps <= epsilon0(M, C, T)) return T;
  return std::min(T, std::log((1.0 + eps * M) / (eps * (1.0 + M))) / C);
}

SingularTerms eval_singular(const RemainderInputs& in) {
  check_eps(in.eps);
  const double eps = in.eps;
  const double root = std::sqrt(eps);
  const double e = std::exp(-in.t / eps);

  const Field grad_d0 = gradient(in.d0);
  const Field grad_D = gradient(in.D);
  const Field grad_dR = gradient(in.dR);
  const Field g00 = squared_norm(grad_d0);
  const Field gRR = squared_norm(grad_dR);
  const Field x0D = gradient_dot(grad_d0, grad_D);
  const Field x0R = gradient_dot(grad_d0, grad_dR);
  const Field W = in.w0 + e * in.D;

  Field S1 = (-1.0 / root) * (in.w00 + e * laplacian(in.D) + scale(squared_norm(W), in.d0) +
                              e * scale(g00, in.D) + (2.0 * e) * scale(x0D, in.d0));
  Field S2 = (1.0 / root) * (2.0 * scale(x0R, in.dR) + scale(gRR, in.d0));
  Field S3 = (1.0 / eps) * (scale(g00, in.dR) + 2.0 * scale(x0R, in.d0));
  return {std::move(S1), std::move(S2), std::move(S3)};
}

RegularTerms eval_regular(const RemainderInputs& in) {
  check_eps(in.eps);
  const double eps = in.eps;
  const double root = std::sqrt(eps);
  const double eps32 = eps * root;
  const double e = std::exp(-in.t / eps);

  const Field grad_d0 = gradient(in.d0);
  const Field grad_D = gradient(in.D);
  const Field grad_dR = gradient(in.dR);
  const Field gDD = squared_norm(grad_D);
  const Field gRR = squared_norm(grad_dR);
  const Field x0D = gradient_dot(grad_d0, grad_D);
  const Field x0R = gradient_dot(grad_d0, grad_dR);
  const Field xDR = gradient_dot(grad_D, grad_dR);
  const Field W = in.w0 + e * in.D;
  const Field WW = squared_norm(W);
  const Field Wv = dot(W, in.vR);
  const Field vv = squared_norm(in.vR);

  Field R1 = (root * e) * scale(WW, in.D) + (root * e * e) * scale(gDD, in.d0) -
             (eps32 * e * e * e) * scale(gDD, in.D) + (2.0 * root * e * e) * scale(x0D, in.D);

  Field R2 = -2.0 * scale(Wv, in.d0) - scale(WW, in.dR) + (2.0 * eps * e) * scale(Wv, in.D) +
             (eps * e * e) * scale(gDD, in.dR) - (2.0 * e) * scale(x0D, in.dR) -
             (2.0 * e) * scale(x0R, in.D) - (2.0 * e) * scale(xDR, in.d0) +
             (2.0 * eps * e * e) * scale(xDR, in.D);

  Field R3 = (eps32 * e) * scale(vv, in.D) - (2.0 * root) * scale(Wv, in.dR) -
             root * scale(vv, in.d0) - (2.0 * root * e) * scale(xDR, in.dR) -
             (root * e) * scale(gRR, in.D);

  Field R4 = -eps * scale(vv, in.dR) + scale(gRR, in.dR);

  return {std::move(R1), std::move(R2), std::move(R3), std::move(R4)};
}

Field decomposition_oracle(const RemainderInputs& in) {
  check_eps(in.eps);
  const double eps = in.eps;
  const double root = std::sqrt(eps);
  const double e = std::exp(-in.t / eps);

  const Field d = in.d0 + (-eps * e) * in.D + root * in.dR;
  const Field d_t = in.w0 + e * in.D + root * in.vR;
  const Field multiplier = squared_norm(gradient(d)) - eps * squared_norm(d_t);
  const Field bracket = scale(multiplier, d) - eps * in.w00 -
                        scale(squared_norm(gradient(in.d0)), in.d0) - (eps * e) * laplacian(in.D);
  return (1.0 / (eps * root)) * bracket;
}

double remainder_residual(std::span<const RemainderProbe> probes, const Field& D) {
  if (probes.size() != 3) {
    throw std::invalid_argument("remainder_residual needs exactly three probes");
  }
  const RemainderState& a = probes[0].remainder;
  const RemainderState& m = probes[1].remainder;
  const RemainderState& b = probes[2].remainder;
  const double h = m.t - a.t;
  if (!(h > 0.0) || std::abs((b.t - m.t) - h) > 1e-9 * h) {
    throw std::invalid_argument("probes must be equally spaced in time");
  }
  if (a.eps != m.eps || b.eps != m.eps) throw MismatchError("probes disagree on eps");

  const Field& d0 = probes[1].d0;
  const Field w0 = heat_rhs(d0);
  const Field w00 = heat_second_time_derivative(d0);
  const RemainderInputs in{d0, w0, w00, D, m.dR, m.vR, m.eps, m.t};

  const Field dR_tt = (1.0 / (h * h)) * (b.dR - 2.0 * m.dR + a.dR);
  const Field residual = dR_tt + (1.0 / m.eps) * (m.vR - laplacian(m.dR)) -
                         eval_singular(in).total() - eval_regular(in).total();
  return l2_norm(residual);
}

double fit_C(std::span<const EnergySample> trace, double eps) {
  check_eps(eps);
  if (trace.size() < 3) throw std::invalid_argument("fit_C needs at least three samples");
  double c = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double dt = trace[i].t - trace[i - 1].t;
    if (!(dt > 0.0)) throw std::invalid_argument("fit_C needs increasing sample times");
    const double slope = (trace[i].E - trace[i - 1].E) / dt;
    const double e_mid = 0.5 * (trace[i].E + trace[i - 1].E);
    const double f_mid = 0.5 * (trace[i].F + trace[i - 1].F);
    c = std::max(c, (slope + 3.0 * f_mid) / ((1.0 + e_mid) * (1.0 + eps * e_mid)));
  }
  return c;
}

}  // namespace relaxlim
