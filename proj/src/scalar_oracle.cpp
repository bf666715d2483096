#include "relaxlim/scalar_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace relaxlim {

namespace {

struct ModePair {
  double a = 0.0;
  double b = 0.0;
};

std::map<int, ModePair> merge_modes(const std::vector<SineMode>& theta0,
                                    const std::vector<SineMode>& theta1) {
  std::map<int, ModePair> modes;
  for (const auto& m : theta0) {
    if (m.k < 0) throw std::invalid_argument("sine modes need k >= 0");
    modes[m.k].a += m.amplitude;
  }
  for (const auto& m : theta1) {
    if (m.k < 0) throw std::invalid_argument("sine modes need k >= 0");
    modes[m.k].b += m.amplitude;
  }
  return modes;
}

// L^2([0, 2 pi)) weight of one basis function.
double basis_weight(int k) { return k == 0 ? 2.0 * std::numbers::pi : std::numbers::pi; }

}  // namespace

std::vector<double> layer_sample_times(double eps, double t_final, int dense, int uniform) {
  std::vector<double> times;
  const double layer_end = std::min(10.0 * eps, t_final);
  for (int i = 0; i <= dense; ++i) times.push_back(layer_end * i / dense);
  if (t_final > layer_end) {
    for (int i = 1; i <= uniform; ++i) {
      times.push_back(layer_end + (t_final - layer_end) * i / uniform);
    }
  }
  return times;
}

ScalarRateStudy scalar_limit_study(const std::vector<SineMode>& theta0,
                                   const std::vector<SineMode>& theta1,
                                   const std::vector<double>& eps_list, double t_final) {
  if (eps_list.size() < 4) throw std::invalid_argument("limit study needs >= 4 eps values");
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) {
      throw std::invalid_argument("eps values must be strictly decreasing");
    }
  }
  if (eps_list.back() <= 0.0 || eps_list.front() / eps_list.back() < 100.0 * (1.0 - 1e-12)) {
    throw std::invalid_argument("eps values must be positive and span >= 2 decades");
  }
  if (!(t_final > 0.0)) throw std::invalid_argument("t_final must be positive");

  const auto modes = merge_modes(theta0, theta1);
  ScalarRateStudy study;
  std::vector<RatePoint> pos;
  std::vector<RatePoint> vel;
  for (double eps : eps_list) {
    ScalarRateRow row{eps, 0.0, 0.0};
    for (double t : layer_sample_times(eps, t_final)) {
      double sum_pos = 0.0;
      double sum_vel = 0.0;
      for (const auto& [k, ab] : modes) {
        const double kk = k;
        const auto wave = damped_mode(ScalarModeIC<double>{kk, ab.a, ab.b, eps}, t);
        const double heat = heat_mode(kk, ab.a, t);
        const auto layer = scalar_layer_mode(kk, ab.a, ab.b, eps, t);
        const double e_pos = wave.value - heat - layer.value;
        const double e_vel = wave.velocity - (-kk * kk * heat) - layer.velocity;
        sum_pos += basis_weight(k) * e_pos * e_pos;
        sum_vel += basis_weight(k) * e_vel * e_vel;
      }
      row.err_pos = std::max(row.err_pos, std::sqrt(sum_pos));
      row.err_vel = std::max(row.err_vel, std::sqrt(sum_vel));
    }
    study.rows.push_back(row);
    pos.push_back({eps, row.err_pos});
    vel.push_back({eps, row.err_vel});
  }
  study.fit_pos = rate_fit(pos);
  study.fit_vel = rate_fit(vel);
  return study;
}

namespace {

Field sine_basis(const GridPtr& grid, int k) {
  return Field::sample(grid, [k](double x, double, double) {
    return k == 0 ? 1.0 : std::sin(k * x);
  });
}

}  // namespace

ScalarProfileState damped_profile(const GridPtr& grid, const std::vector<SineMode>& theta0,
                                  const std::vector<SineMode>& theta1, double eps, double t) {
  ScalarProfileState out{Field(grid, 1), Field(grid, 1)};
  for (const auto& [k, ab] : merge_modes(theta0, theta1)) {
    const auto g = damped_mode(ScalarModeIC<double>{static_cast<double>(k), ab.a, ab.b, eps}, t);
    const Field basis = sine_basis(grid, k);
    out.theta = out.theta + g.value * basis;
    out.theta_t = out.theta_t + g.velocity * basis;
  }
  return out;
}

ScalarProfileState heat_profile(const GridPtr& grid, const std::vector<SineMode>& theta0,
                                double t) {
  ScalarProfileState out{Field(grid, 1), Field(grid, 1)};
  for (const auto& [k, ab] : merge_modes(theta0, {})) {
    const double kk = k;
    const double h = heat_mode(kk, ab.a, t);
    const Field basis = sine_basis(grid, k);
    out.theta = out.theta + h * basis;
    out.theta_t = out.theta_t + (-kk * kk * h) * basis;
  }
  return out;
}

}  // namespace relaxlim
