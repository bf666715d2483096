#ifndef RELAXLIM_SCALAR_ORACLE_HPP_
#define RELAXLIM_SCALAR_ORACLE_HPP_

// Exact mode solutions of the linear scalar problems
//
//   eps g'' + g' + k^2 g = 0      (damped wave, one Fourier mode)
//   h' = -k^2 h                   (heat, one Fourier mode)
//
// and the equator lift that turns them into sphere-valued solutions of the
// wave map and the harmonic map heat flow.

#include "relaxlim/geometry.hpp"
#include "relaxlim/rate_fit.hpp"

#include <cmath>
#include <vector>

namespace relaxlim {

template <typename Scalar>
struct ScalarModeIC {
  Scalar k = 0;    // wavenumber
  Scalar a = 0;    // g(0)
  Scalar b = 0;    // g'(0)
  Scalar eps = 0;  // inertia, > 0
};

template <typename Scalar>
struct ModeValue {
  Scalar value;
  Scalar velocity;
};

/// n-th time derivative of the damped mode at time t >= 0.
///
/// k = 0 has the closed form a + eps b (1 - e^{-t/eps}). Otherwise the
/// roots are lambda = mu +- omega with mu = -1/(2 eps), omega^2 = (1 - 4 eps k^2)/(4 eps^2).
/// Well-separated real roots use the two-exponential form with the heat-like
/// root evaluated as -2k^2 / (1 + sqrt(1 - 4 eps k^2)). Everything else
/// (complex roots, double root, omega t < 1/2) uses
///   g = e^{mu t} [p C(t) + q S(t)],  C = cosh/cos(omega t), S = sinh/sin(omega t) / omega,
/// with p, q from the derivative's own initial data.
template <typename Scalar>
Scalar damped_mode_derivative(const ScalarModeIC<Scalar>& ic, const Scalar& t, int order) {
  using std::abs;
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::sin;
  using std::sinh;
  using std::sqrt;

  const Scalar& eps = ic.eps;
  const Scalar k2 = ic.k * ic.k;
  const Scalar disc = Scalar(1) - Scalar(4) * eps * k2;
  const Scalar mu = Scalar(-1) / (Scalar(2) * eps);
  const Scalar omega_sq = disc / (Scalar(4) * eps * eps);
  const Scalar omega = sqrt(abs(omega_sq));
  const Scalar x = omega * t;

  if (ic.k == 0) {
    // g = a + eps b (1 - e^{-t/eps})
    const Scalar decay = exp(-t / eps);
    if (order == 0) return ic.a + eps * ic.b * (Scalar(1) - decay);
    Scalar out = ic.b * decay;
    for (int i = 1; i < order; ++i) out = -out / eps;
    return out;
  }

  if (omega_sq > 0 && x >= Scalar(0.5)) {
    const Scalar root = sqrt(disc);
    const Scalar slow = Scalar(-2) * k2 / (Scalar(1) + root);
    const Scalar fast = -(Scalar(1) + root) / (Scalar(2) * eps);
    const Scalar c_slow = eps * (ic.b - fast * ic.a) / root;
    const Scalar c_fast = eps * (slow * ic.a - ic.b) / root;
    Scalar ps = c_slow;
    Scalar pf = c_fast;
    for (int i = 0; i < order; ++i) {
      ps *= slow;
      pf *= fast;
    }
    return ps * exp(slow * t) + pf * exp(fast * t);
  }

  // The order-th derivative solves the same ODE; its data at t = 0 comes
  // from the ODE itself.
  Scalar p = ic.a;
  Scalar p_next = ic.b;
  for (int i = 0; i < order; ++i) {
    const Scalar p_after = -(p_next + k2 * p) / eps;
    p = p_next;
    p_next = p_after;
  }
  const Scalar q = p_next - mu * p;

  Scalar c;
  Scalar s;
  if (omega == 0) {
    // confluent root
    c = Scalar(1);
    s = t;
  } else if (omega_sq >= 0) {
    c = cosh(x);
    s = sinh(x) / omega;
  } else {
    c = cos(x);
    s = sin(x) / omega;
  }
  return exp(mu * t) * (p * c + q * s);
}

template <typename Scalar>
ModeValue<Scalar> damped_mode(const ScalarModeIC<Scalar>& ic, const Scalar& t) {
  return {damped_mode_derivative(ic, t, 0), damped_mode_derivative(ic, t, 1)};
}

template <typename Scalar>
Scalar heat_mode(const Scalar& k, const Scalar& a, const Scalar& t) {
  using std::exp;
  return a * exp(-k * k * t);
}

/// Scalar initial layer -eps (b + k^2 a) e^{-t/eps} of one mode and its time
/// derivative.
template <typename Scalar>
ModeValue<Scalar> scalar_layer_mode(const Scalar& k, const Scalar& a, const Scalar& b,
                                    const Scalar& eps, const Scalar& t) {
  using std::exp;
  const Scalar mismatch = b + k * k * a;
  const Scalar decay = exp(-t / eps);
  return {-eps * mismatch * decay, mismatch * decay};
}

/// One sine mode of a 1-D profile on [0, 2 pi): amplitude * sin(k x), or a
/// constant when k == 0.
struct SineMode {
  int k = 1;
  double amplitude = 0.0;
};

struct ScalarRateRow {
  double eps = 0.0;
  double err_pos = 0.0;
  double err_vel = 0.0;
};

struct ScalarRateStudy {
  std::vector<ScalarRateRow> rows;
  RateFit fit_pos;
  RateFit fit_vel;
};

/// Sup over t <= t_final of the L^2 distance between the damped-wave
/// solution and heat solution plus scalar layer (and the same for the time
/// derivative), for each eps, from exact mode solutions.
ScalarRateStudy scalar_limit_study(const std::vector<SineMode>& theta0,
                                   const std::vector<SineMode>& theta1,
                                   const std::vector<double>& eps_list, double t_final);

/// Sample times for sup-in-time norms: dense on [0, 10 eps], uniform after.
std::vector<double> layer_sample_times(double eps, double t_final, int dense = 400,
                                       int uniform = 400);

/// Evaluates sum_k g_k(t) sin(k x) over the grid (first axis), and the
/// same for the velocity, using damped_mode for every mode.
struct ScalarProfileState {
  Field theta;
  Field theta_t;
};
ScalarProfileState damped_profile(const GridPtr& grid, const std::vector<SineMode>& theta0,
                                  const std::vector<SineMode>& theta1, double eps, double t);
ScalarProfileState heat_profile(const GridPtr& grid, const std::vector<SineMode>& theta0,
                                double t);

}  // namespace relaxlim

#endif  // RELAXLIM_SCALAR_ORACLE_HPP_
