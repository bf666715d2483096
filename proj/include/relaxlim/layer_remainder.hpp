#ifndef RELAXLIM_LAYER_REMAINDER_HPP_
#define RELAXLIM_LAYER_REMAINDER_HPP_

// Initial layer, remainder extraction, the singular/regular split of the
// remainder equation
//
//   d_R'' + (1/eps) d_R' - (1/eps) Delta d_R = S + R
//
// for d^eps = d0 - eps D e^{-t/eps} + sqrt(eps) d_R, and the energy
// functionals and closed-form Gronwall bounds built on it.

#include "relaxlim/heat_flow.hpp"
#include "relaxlim/wave_map.hpp"

#include <span>
#include <vector>

namespace relaxlim {

/// D = dtilde - Delta d_in - |grad d_in|^2 d_in. Throws CompatibilityError
/// when max |d_in . dtilde| > 1e-8.
Field compute_D(const DirectorField& d_in, const Field& dtilde_in);

/// max |d_in . D|; zero up to discretization for unit d_in.
double layer_tangency_violation(const DirectorField& d_in, const Field& D);

/// -eps D e^{-t/eps}
Field layer_eval(const Field& D, double eps, double t);
/// D e^{-t/eps}
Field layer_time_derivative(const Field& D, double eps, double t);

struct RemainderState {
  double t = 0.0;
  double eps = 0.0;
  Field dR;
  Field vR;  // time derivative of dR
};

/// dR = (d^eps - d0 - layer) / sqrt(eps),
/// vR = (v^eps - heat_rhs(d0) - D e^{-t/eps}) / sqrt(eps).
/// Throws MismatchError on differing grids or time stamps.
RemainderState extract_remainder(const WaveMapState& wave, const HeatFlowState& heat,
                                 const Field& D);

struct EnergyPair {
  double E = 0.0;
  double F = 0.0;
};

/// E_eps = |vR|^2_{H2} + (1/eps - 1)|dR|^2_{H2} + (2/eps)|grad dR|^2_{H2} + |vR + dR|^2_{H2}
double energy_E(const RemainderState& r);
/// F_eps = (1/eps - 1/2)|vR|^2_{H2} + (1/(2 eps))|grad dR|^2_{H2}
double energy_F(const RemainderState& r);
EnergyPair energies(const RemainderState& r);

/// M = |D|^2_{H2} + 2 |grad D|^2_{H2}
double M_value(const Field& D);

/// 2 M e^{Ct} / (1 + eps M - eps (1 + M) e^{Ct}). Throws std::domain_error
/// when the denominator is not positive (t >= T_eps).
double bound_curve(double M, double C, double eps, double t);
/// min{T, ln((1 + eps M) / (eps (1 + M))) / C}; exactly T for eps <= epsilon0.
double T_eps(double M, double C, double T, double eps);
/// min{1/2, 1 / ((1 + M) e^{CT} - M)}
double epsilon0(double M, double C, double T);

/// All fields entering the remainder equation at one time.
struct RemainderInputs {
  const Field& d0;
  const Field& w0;   // d0_t
  const Field& w00;  // d0_tt
  const Field& D;
  const Field& dR;
  const Field& vR;
  double eps;
  double t;
};

struct SingularTerms {
  Field S1, S2, S3;
  Field total() const { return S1 + S2 + S3; }
};

struct RegularTerms {
  Field R1, R2, R3, R4;
  Field total() const { return R1 + R2 + R3 + R4; }
};

SingularTerms eval_singular(const RemainderInputs& in);
RegularTerms eval_regular(const RemainderInputs& in);

/// eps^{-3/2} [N(d) - eps d0_tt - |grad d0|^2 d0 - eps Delta D e^{-t/eps}]
/// with N(d) = (|grad d|^2 - eps |d_t|^2) d evaluated on the assembled
/// d = d0 - eps D e^{-t/eps} + sqrt(eps) dR. Equals S + R identically.
Field decomposition_oracle(const RemainderInputs& in);

struct RemainderProbe {
  RemainderState remainder;
  Field d0;
};

/// L^2 norm of d_R'' + (1/eps) vR - (1/eps) Delta dR - S - R at the middle
/// of three equally spaced probes, with d_R'' by centered differences.
double remainder_residual(std::span<const RemainderProbe> probes, const Field& D);

struct EnergySample {
  double t = 0.0;
  double E = 0.0;
  double F = 0.0;
};

/// Smallest C >= 0 with dE/dt + 3F <= C (1 + E)(1 + eps E) on every sample
/// interval (difference quotient against interval-averaged E and F).
double fit_C(std::span<const EnergySample> trace, double eps);

}  // namespace relaxlim

#endif  // RELAXLIM_LAYER_REMAINDER_HPP_
