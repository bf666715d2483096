#ifndef RELAXLIM_INITIAL_DATA_HPP_
#define RELAXLIM_INITIAL_DATA_HPP_

#include "relaxlim/config.hpp"
#include "relaxlim/geometry.hpp"
#include "relaxlim/scalar_oracle.hpp"

#include <optional>
#include <random>

namespace relaxlim {

struct InitialData {
  DirectorField d_in;
  Field dtilde_in;  // tangent to d_in
  // Scalar profiles behind the equator preset, for oracle comparisons.
  std::optional<std::pair<std::vector<SineMode>, std::vector<SineMode>>> equator_profiles;
};

GridPtr make_grid(const ExperimentConfig& c);

/// constant: d = (0, 0, 1), zero velocity.
/// equator: d = (cos th0, sin th0, 0) with th0 = A sin(m x) and velocity
///   th1 (-sin th0, cos th0, 0), th1 = B sin(m x), th0'' or 0.
/// twisted: d = (cos(a sin x) cos(b sin y), cos(a sin x) sin(b sin y), sin(a sin x)),
///   velocity the tangent part of B (sin(m x + p1), cos(m y + p2), sin(m (x + y) + p3))
///   with seeded phases, or heat_rhs(d) when well prepared.
InitialData make_initial_data(const ExperimentConfig& c, const GridPtr& grid);

/// Real field whose Fourier content is confined to |m_j| <= max_mode on
/// every axis, uniform random coefficients, rescaled to max |f| = amplitude.
Field random_band_limited(const GridPtr& grid, int components, int max_mode, double amplitude,
                          std::mt19937_64& rng);

}  // namespace relaxlim

#endif  // RELAXLIM_INITIAL_DATA_HPP_
