#include "relaxlim/errors.hpp"
#include "relaxlim/initial_data.hpp"
#include "relaxlim/layer_remainder.hpp"
#include "relaxlim/limit_study.hpp"
#include "relaxlim/scalar_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace relaxlim;

namespace {

const double kPi = std::numbers::pi;

Field equator_tangent(const Field& theta) {
  const GridPtr& g = theta.grid_ptr();
  Eigen::ArrayXXd t(g->size(), 3);
  t << -theta.values().sin(), theta.values().cos(), Eigen::ArrayXd::Zero(g->size());
  return Field(g, t);
}

Field vector_field(const GridPtr& g, double (*fx)(double)) {
  return Field::sample_vector(g, [fx](double x, double, double) -> Eigen::Vector3d {
    return Eigen::Vector3d(fx(x), 0.0, 0.0);
  });
}

DirectorField north(const GridPtr& g) {
  return DirectorField::checked(Field::sample_vector(
      g, [](double, double, double) -> Eigen::Vector3d { return Eigen::Vector3d(0.0, 0.0, 1.0); }));
}

struct EquatorCase {
  std::vector<SineMode> th0{{1, 0.4}, {2, 0.1}};
  std::vector<SineMode> th1{{1, 0.3}};
  double eps = 0.05;
  GridPtr grid = SpectralGrid::make(1, {64});

  WaveMapState wave(double t) const {
    const ScalarProfileState s = damped_profile(grid, th0, th1, eps, t);
    const DirectorField d = lift_to_equator(s.theta);
    return {t, eps, d, project_to_tangent(d, scale(s.theta_t, equator_tangent(s.theta)))};
  }
  HeatFlowState heat(double t) const {
    return {t, lift_to_equator(heat_profile(grid, th0, t).theta)};
  }
  Field D() const {
    const WaveMapState w = wave(0.0);
    return compute_D(w.d, w.v.field());
  }
  RemainderProbe probe(double t) const {
    return {extract_remainder(wave(t), heat(t), D()), heat(t).d0.field()};
  }
};

}  // namespace

TEST(ComputeD, Examples) {
  auto g = SpectralGrid::make(2, {16});
  EXPECT_EQ(max_abs(compute_D(north(g), Field(g, 3))), 0.0);

  auto g1 = SpectralGrid::make(1, {32});
  const Field theta = Field::sample(g1, [](double x, double, double) { return x; });
  const DirectorField geodesic = lift_to_equator(theta);
  const Field dtilde = 0.7 * equator_tangent(theta);
  EXPECT_LE(max_abs(compute_D(geodesic, dtilde) - dtilde), 1e-13);
  EXPECT_LE(layer_tangency_violation(geodesic, compute_D(geodesic, dtilde)), 1e-13);

  EXPECT_THROW(compute_D(north(g), north(g).field()), CompatibilityError);
}

TEST(Layer, DecaysByTenAtEpsLogTen) {
  auto g = SpectralGrid::make(1, {16});
  const Field D = vector_field(g, [](double x) { return std::sin(x); });
  const double eps = 0.02;
  const double t = eps * std::log(10.0);
  EXPECT_LE(max_abs(layer_eval(D, eps, t) + (eps / 10.0) * D), 1e-17);
  EXPECT_LE(max_abs(layer_time_derivative(D, eps, t) - 0.1 * D), 1e-15);
  EXPECT_EQ(max_abs(layer_eval(D, eps, 0.0) + eps * D), 0.0);
}

TEST(ExtractRemainder, InitialValues) {
  const EquatorCase c;
  const Field D = c.D();
  const RemainderState r = extract_remainder(c.wave(0.0), c.heat(0.0), D);
  EXPECT_LE(max_abs(r.dR - std::sqrt(c.eps) * D), 1e-14);
  EXPECT_LE(max_abs(r.vR), 1e-14);
  EXPECT_NEAR(energy_E(r), M_value(D), 1e-10 * M_value(D));
}

TEST(ExtractRemainder, ReconstructsTheWaveMap) {
  const EquatorCase c;
  const Field D = c.D();
  for (double t : {0.01, 0.2}) {
    const WaveMapState w = c.wave(t);
    const HeatFlowState h = c.heat(t);
    const RemainderState r = extract_remainder(w, h, D);
    const Field d = h.d0.field() + layer_eval(D, c.eps, t) + std::sqrt(c.eps) * r.dR;
    const Field v = heat_rhs(h.d0) + layer_time_derivative(D, c.eps, t) + std::sqrt(c.eps) * r.vR;
    EXPECT_LE(max_abs(d - w.d.field()), 1e-14);
    EXPECT_LE(max_abs(v - w.v.field()), 1e-13);
  }
}

TEST(ExtractRemainder, RejectsMismatches) {
  const EquatorCase c;
  EXPECT_THROW(extract_remainder(c.wave(0.1), c.heat(0.2), c.D()), MismatchError);
  auto other = SpectralGrid::make(1, {32});
  EXPECT_THROW(extract_remainder(c.wave(0.1), HeatFlowState{0.1, north(other)}, c.D()),
               MismatchError);
}

TEST(Energies, ZeroRemainder) {
  auto g = SpectralGrid::make(1, {16});
  const RemainderState r{0.0, 0.1, Field(g, 3), Field(g, 3)};
  EXPECT_EQ(energy_E(r), 0.0);
  EXPECT_EQ(energy_F(r), 0.0);
  EXPECT_THROW(energy_E(RemainderState{0.0, 0.5, Field(g, 3), Field(g, 3)}), std::invalid_argument);
}

TEST(Energies, ConstantVelocity) {
  auto g = SpectralGrid::make(1, {16});
  const double eps = 0.1;
  const Field vR = Field::sample_vector(
      g, [](double, double, double) -> Eigen::Vector3d { return Eigen::Vector3d(1.0, 2.0, 2.0); });
  const EnergyPair e = energies({0.0, eps, Field(g, 3), vR});
  // |vR|^2_{L2} = 9 * 2 pi, no gradients
  EXPECT_NEAR(e.E, 2.0 * 18.0 * kPi, 1e-12);
  EXPECT_NEAR(e.F, (1.0 / eps - 0.5) * 18.0 * kPi, 1e-11);
}

TEST(Energies, AgainstDirectQuadrature) {
  // dR = (sin x, 0, 0), vR = (0, cos 2x, 0) at eps = 1/4, with every
  // derivative written out and integrated by the grid rule
  auto g = SpectralGrid::make(1, {32});
  const double h = 2.0 * kPi / 32.0;
  const auto l2 = [&](auto f) {
    double s = 0.0;
    for (int i = 0; i < 32; ++i) s += f(i * h) * f(i * h);
    return std::sqrt(h * s);
  };
  const auto S = [](double x) { return std::sin(x); };
  const auto C = [](double x) { return std::cos(x); };
  const auto C2 = [](double x) { return std::cos(2 * x); };
  const auto S2 = [](double x) { return std::sin(2 * x); };
  const double dR_h2 = l2(S) + l2(C) + l2(S);
  const double dR_grad_h2 = l2(C) + l2(S) + l2(C);
  const double vR_h2 = l2(C2) + 2 * l2(S2) + 4 * l2(C2);
  // |vR + dR| splits across components, but the H2 norm sums norms of whole tensors
  const auto pair_norm = [&](auto f, auto k) {
    double s = 0.0;
    for (int i = 0; i < 32; ++i) s += f(i * h) * f(i * h) + k(i * h) * k(i * h);
    return std::sqrt(h * s);
  };
  const double sum_h2 = pair_norm(S, C2) + pair_norm(C, [](double x) { return 2 * std::sin(2 * x); }) +
                        pair_norm(S, [](double x) { return 4 * std::cos(2 * x); });
  const double eps = 0.25;
  const double expected_E = vR_h2 * vR_h2 + (1 / eps - 1) * dR_h2 * dR_h2 +
                            (2 / eps) * dR_grad_h2 * dR_grad_h2 + sum_h2 * sum_h2;
  const double expected_F = (1 / eps - 0.5) * vR_h2 * vR_h2 + (0.5 / eps) * dR_grad_h2 * dR_grad_h2;

  const Field dR = vector_field(g, [](double x) { return std::sin(x); });
  const Field vR = Field::sample_vector(g, [](double x, double, double) -> Eigen::Vector3d {
    return Eigen::Vector3d(0.0, std::cos(2 * x), 0.0);
  });
  const EnergyPair e = energies({0.0, eps, dR, vR});
  EXPECT_NEAR(e.E, expected_E, 1e-11 * expected_E);
  EXPECT_NEAR(e.F, expected_F, 1e-11 * expected_F);
}

TEST(Bounds, MOfASineMode) {
  auto g = SpectralGrid::make(1, {16});
  // |D|_{H2} = |grad D|_{H2} = 3 sqrt(pi)
  EXPECT_NEAR(M_value(vector_field(g, [](double x) { return std::sin(x); })), 27.0 * kPi, 1e-12);
  EXPECT_EQ(M_value(Field(g, 3)), 0.0);
}

TEST(Bounds, CurveAndHorizon) {
  const double M = 3.0, C = 0.8, T = 1.0;
  for (double eps : {0.3, 0.1, 0.01}) {
    EXPECT_NEAR(bound_curve(M, C, eps, 0.0), 2.0 * M / (1.0 - eps), 1e-14);
  }
  const double e0 = epsilon0(M, C, T);
  EXPECT_NEAR(e0, 1.0 / (4.0 * std::exp(0.8) - 3.0), 1e-15);
  EXPECT_EQ(T_eps(M, C, T, e0), T);
  EXPECT_EQ(T_eps(M, C, T, 0.5 * e0), T);
  // at eps0 itself the bound blows up exactly at T
  EXPECT_NO_THROW(bound_curve(M, C, e0, T * (1.0 - 1e-9)));
  EXPECT_THROW(bound_curve(M, C, e0, T * (1.0 + 1e-9)), std::domain_error);
  EXPECT_NO_THROW(bound_curve(M, C, 0.5 * e0, T));

  const double eps = 0.4;
  const double horizon = T_eps(M, C, T, eps);
  EXPECT_LT(horizon, T);
  EXPECT_NO_THROW(bound_curve(M, C, eps, horizon * (1.0 - 1e-9)));
  EXPECT_THROW(bound_curve(M, C, eps, horizon * (1.0 + 1e-9)), std::domain_error);
  EXPECT_THROW(bound_curve(-1.0, C, eps, 0.0), std::invalid_argument);
}

TEST(Bounds, DegenerateInputs) {
  // D = 0
  EXPECT_NEAR(epsilon0(0.0, 2.0, 1.0), std::exp(-2.0), 1e-16);
  EXPECT_EQ(epsilon0(0.0, 0.1, 1.0), 0.5);
  EXPECT_EQ(bound_curve(0.0, 2.0, 0.1, 0.5), 0.0);
  // C = 0: the bound never blows up before T
  EXPECT_EQ(epsilon0(5.0, 0.0, 1.0), 0.5);
  EXPECT_EQ(T_eps(5.0, 0.0, 1.0, 0.49), 1.0);
  EXPECT_NEAR(bound_curve(5.0, 0.0, 0.2, 7.0), 10.0 / 0.8, 1e-14);
}

TEST(Decomposition, ZeroRemainderAndLayer) {
  auto g = SpectralGrid::make(2, {16});
  const Field d0 = north(g).field();
  const Field zero(g, 3);
  const RemainderInputs in{d0, zero, zero, zero, zero, zero, 0.1, 0.0};
  const SingularTerms s = eval_singular(in);
  const RegularTerms r = eval_regular(in);
  EXPECT_EQ(max_abs(s.total()), 0.0);
  EXPECT_EQ(max_abs(r.total()), 0.0);
  EXPECT_EQ(max_abs(decomposition_oracle(in)), 0.0);
}

TEST(Decomposition, OnlyS1SurvivesWithoutLayerOrRemainder) {
  std::mt19937_64 rng(7);
  auto g = SpectralGrid::make(2, {16});
  const Field d0 = project_to_sphere(north(g).field() + random_band_limited(g, 3, 2, 0.5, rng)).field();
  const Field w0 = heat_rhs(d0);
  const Field w00 = heat_second_time_derivative(d0);
  const Field zero(g, 3);
  const RemainderInputs in{d0, w0, w00, zero, zero, zero, 0.04, 0.3};
  const SingularTerms s = eval_singular(in);
  EXPECT_EQ(max_abs(s.S2), 0.0);
  EXPECT_EQ(max_abs(s.S3), 0.0);
  EXPECT_EQ(max_abs(eval_regular(in).total()), 0.0);
  EXPECT_LE(max_abs(s.S1 + 5.0 * (w00 + scale(squared_norm(w0), d0))), 1e-12 * max_abs(s.S1));
}

TEST(Decomposition, LayerForcingScalesWithRootEps) {
  std::mt19937_64 rng(11);
  auto g = SpectralGrid::make(1, {32});
  const Field d0 = project_to_sphere(north(g).field() + random_band_limited(g, 3, 3, 0.5, rng)).field();
  const Field w0 = heat_rhs(d0);
  const Field D = random_band_limited(g, 3, 3, 1.0, rng);
  const Field zero(g, 3);
  const auto r1 = [&](double eps) {
    return l2_norm(eval_regular({d0, w0, zero, D, zero, zero, eps, 0.0}).R1);
  };
  EXPECT_NEAR(r1(1e-4) / r1(1e-6), 10.0, 1e-3);
}

TEST(Decomposition, IdentityOnRandomFields) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (const auto& c : verify_decomposition(seed, 16, 2)) EXPECT_LE(c.deviation, 1e-11);
  }
  for (const auto& c : verify_decomposition(3, 32, 1)) EXPECT_LE(c.deviation, 1e-11);
  for (const auto& c : verify_decomposition(4, 8, 3)) EXPECT_LE(c.deviation, 1e-11);
}

TEST(Residual, ZeroDataGivesZero) {
  auto g = SpectralGrid::make(1, {16});
  const Field zero(g, 3);
  const Field d0 = north(g).field();
  std::vector<RemainderProbe> probes;
  for (double t : {0.1, 0.2, 0.3}) probes.push_back({{t, 0.1, zero, zero}, d0});
  EXPECT_EQ(remainder_residual(probes, zero), 0.0);

  EXPECT_THROW(remainder_residual(std::span(probes).first(2), zero), std::invalid_argument);
  probes[2].remainder.t = 0.35;
  EXPECT_THROW(remainder_residual(probes, zero), std::invalid_argument);
}

TEST(Residual, ExactSolutionsConvergeAtSecondOrder) {
  const EquatorCase c;
  const Field D = c.D();
  const double t = 0.1;
  const auto residual = [&](double p) {
    const std::vector<RemainderProbe> probes{c.probe(t - p), c.probe(t), c.probe(t + p)};
    return remainder_residual(probes, D);
  };
  const double coarse = residual(2e-3);
  const double fine = residual(1e-3);
  EXPECT_GE(coarse / fine, 3.5);
  EXPECT_LE(coarse / fine, 4.5);
  EXPECT_LE(fine, 1e-3);
}

TEST(FitC, Examples) {
  // E = t, F = 0: C = max 1 / ((1 + E) (1 + eps E)) at the first interval midpoint
  const double eps = 0.1;
  const std::vector<EnergySample> rising{{0.0, 0.0, 0.0}, {0.5, 0.5, 0.0}, {1.0, 1.0, 0.0}};
  EXPECT_NEAR(fit_C(rising, eps), 1.0 / (1.25 * (1.0 + eps * 0.25)), 1e-15);

  const std::vector<EnergySample> falling{{0.0, 2.0, 0.0}, {1.0, 1.0, 0.0}, {2.0, 0.5, 0.0}};
  EXPECT_EQ(fit_C(falling, eps), 0.0);

  const std::vector<EnergySample> dissipative{{0.0, 2.0, 1.0}, {1.0, 1.0, 1.0}, {2.0, 0.0, 1.0}};
  EXPECT_NEAR(fit_C(dissipative, eps), 2.0 / (1.5 * 1.05), 1e-15);

  EXPECT_THROW(fit_C(std::span(rising).first(2), eps), std::invalid_argument);
  const std::vector<EnergySample> repeated{{0.0, 0.0, 0.0}, {0.0, 0.5, 0.0}, {1.0, 1.0, 0.0}};
  EXPECT_THROW(fit_C(repeated, eps), std::invalid_argument);
}
