#include "relaxlim/heat_flow.hpp"
#include "relaxlim/scalar_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace relaxlim;

namespace {

Field equator_tangent(const Field& theta) {
  const GridPtr& g = theta.grid_ptr();
  Eigen::ArrayXXd t(g->size(), 3);
  t << -theta.values().sin(), theta.values().cos(), Eigen::ArrayXd::Zero(g->size());
  return Field(g, t);
}

const std::vector<SineMode> kProfile{{1, 0.1}};

// max distance between the solver and the lifted heat profile at t = 1
double tracking_error(const std::vector<SineMode>& profile, int n, double dt) {
  auto g = SpectralGrid::make(1, {n});
  const HeatRun run = heat_solve(lift_to_equator(heat_profile(g, profile, 0.0).theta), 1.0, dt,
                                 1 << 30);
  const Field exact = lift_to_equator(heat_profile(g, profile, 1.0).theta).field();
  return max_abs(run.snapshots.back().d0.field() - exact);
}

}  // namespace

TEST(HeatRhs, EquatorLiftGivesThetaDoublePrime) {
  auto g = SpectralGrid::make(1, {64});
  const Field theta = Field::sample(g, [](double x, double, double) {
    return 0.3 * std::sin(x) + 0.1 * std::sin(2 * x);
  });
  const Field theta_xx = Field::sample(g, [](double x, double, double) {
    return -0.3 * std::sin(x) - 0.4 * std::sin(2 * x);
  });
  const Field rhs = heat_rhs(lift_to_equator(theta));
  EXPECT_LE(max_abs(rhs - scale(theta_xx, equator_tangent(theta))), 1e-13);
}

TEST(HeatRhs, GeodesicIsStationary) {
  auto g = SpectralGrid::make(1, {32});
  const Field theta = Field::sample(g, [](double x, double, double) { return x; });
  const DirectorField d = lift_to_equator(theta);
  EXPECT_LE(max_abs(heat_rhs(d)), 1e-13);
  EXPECT_NEAR(dirichlet_energy(d), std::numbers::pi, 1e-13);
}

TEST(HeatRhs, SecondTimeDerivativeAgainstCenteredDifference) {
  auto g = SpectralGrid::make(1, {64});
  const std::vector<SineMode> profile{{1, 0.6}, {2, 0.2}};
  const double t = 0.2;
  const double delta = 1e-4;
  const Field fd = (1.0 / (2.0 * delta)) *
                   (heat_rhs(lift_to_equator(heat_profile(g, profile, t + delta).theta)) -
                    heat_rhs(lift_to_equator(heat_profile(g, profile, t - delta).theta)));
  const Field analytic = heat_second_time_derivative(lift_to_equator(heat_profile(g, profile, t).theta));
  EXPECT_LE(max_abs(analytic - fd), 1e-6);
}

TEST(HeatRhs, SecondTimeDerivativeOfEquatorFlow) {
  // d_tt = theta_tt tau - theta_t^2 d along the lifted heat flow
  auto g = SpectralGrid::make(1, {64});
  const std::vector<SineMode> profile{{1, 0.6}, {2, 0.2}};
  const ScalarProfileState s = heat_profile(g, profile, 0.3);
  const Field theta_tt = Field::sample(g, [](double x, double, double) {
    return 0.6 * std::exp(-0.3) * std::sin(x) + 16.0 * 0.2 * std::exp(-1.2) * std::sin(2 * x);
  });
  const DirectorField d = lift_to_equator(s.theta);
  const Field expected = scale(theta_tt, equator_tangent(s.theta)) -
                         scale(squared_norm(s.theta_t), d.field());
  // fourth derivatives amplify rounding by about 32^4
  EXPECT_LE(max_abs(heat_second_time_derivative(d) - expected), 1e-9);
}

TEST(HeatSolve, ConstantFieldStaysPut) {
  auto g = SpectralGrid::make(2, {16});
  const DirectorField d = DirectorField::checked(Field::sample_vector(
      g, [](double, double, double) -> Eigen::Vector3d { return Eigen::Vector3d(0.6, 0.0, 0.8); }));
  const HeatRun run = heat_solve(d, 0.5, 1e-2, 10);
  for (const auto& s : run.snapshots) EXPECT_EQ(max_abs(s.d0.field() - d.field()), 0.0);
  for (const auto& r : run.trace) EXPECT_EQ(r.dirichlet_energy, 0.0);
}

TEST(HeatSolve, TracksTheEquatorOracle) {
  EXPECT_LE(tracking_error(kProfile, 64, 1e-3), 1e-4);
  EXPECT_LE(tracking_error({{1, 0.8}, {3, 0.2}}, 64, 1e-3), 1e-4);
}

TEST(HeatSolve, SecondOrderInTime) {
  for (const auto& profile : {kProfile, std::vector<SineMode>{{1, 0.8}, {3, 0.2}}}) {
    const double ratio = tracking_error(profile, 64, 1e-3) / tracking_error(profile, 64, 5e-4);
    EXPECT_GE(ratio, 3.4);
    EXPECT_LE(ratio, 4.6);
  }
}

TEST(HeatSolve, EnergyDecreasesEveryStep) {
  auto g = SpectralGrid::make(2, {32});
  const DirectorField d = project_to_sphere(Field::sample_vector(
      g, [](double x, double y, double) -> Eigen::Vector3d {
        const double p = 0.7 * std::sin(x), q = 0.5 * std::sin(y);
        return Eigen::Vector3d(std::cos(p) * std::cos(q), std::cos(p) * std::sin(q), std::sin(p));
      }));
  const HeatRun run = heat_solve(d, 0.5, 1e-3, 1);
  for (std::size_t i = 1; i < run.trace.size(); ++i) {
    EXPECT_LE(run.trace[i].dirichlet_energy - run.trace[i - 1].dirichlet_energy, 1e-10);
    EXPECT_LE(run.trace[i].unit_violation, 1e-14);
  }
}

TEST(HeatSolve, LandsExactlyOnFinalTime) {
  auto g = SpectralGrid::make(1, {16});
  const HeatRun run = heat_solve(lift_to_equator(heat_profile(g, kProfile, 0.0).theta), 0.25,
                                 0.1, 2);
  EXPECT_EQ(run.snapshot_steps, (std::vector<long>{0, 2, 3}));
  EXPECT_EQ(run.snapshots.back().t, 0.25);
  EXPECT_THROW(heat_solve(run.snapshots.front().d0, 0.0, 0.1, 1), std::invalid_argument);
  EXPECT_THROW(heat_solve(run.snapshots.front().d0, 1.0, 0.1, 0), std::invalid_argument);
}

TEST(HeatSolve, TraceCsvHeader) {
  auto g = SpectralGrid::make(1, {16});
  const HeatRun run = heat_solve(lift_to_equator(heat_profile(g, kProfile, 0.0).theta), 0.1,
                                 0.05, 1);
  const auto path = std::filesystem::temp_directory_path() / "relaxlim_heat_trace.csv";
  write_heat_trace(path, run.trace);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,dirichlet_energy,h1,h2,h3,unit_violation");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 3);
  std::filesystem::remove(path);
}
