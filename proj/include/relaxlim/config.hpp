#ifndef RELAXLIM_CONFIG_HPP_
#define RELAXLIM_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace relaxlim {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Preset { kConstant, kEquator, kTwisted };
enum class VelocityMode { kExplicit, kWellPrepared, kZero };

struct ExperimentConfig {
  // domain
  int dim = 1;
  std::vector<int> n{64};
  std::vector<double> length;  // empty: 2 pi on every axis

  // time
  double t_final = 1.0;
  double dt = 1e-3;
  int stride = 10;
  double probe_dt = 0.0;  // 0: one solver step

  // physics; eps_list wins over eps when both are given
  std::vector<double> eps_list{0.1};

  // init
  Preset preset = Preset::kEquator;
  double theta0_amplitude = 0.1;
  int theta0_wavenumber = 1;
  VelocityMode theta1_mode = VelocityMode::kExplicit;
  double theta1_amplitude = 0.1;
  double twist_a = 0.5;
  double twist_b = 0.5;

  std::filesystem::path output_dir = "out";

  // run toggles
  bool run_heat = true;
  bool run_wave = true;
  bool run_remainder_diagnostics = true;
  bool run_decomposition_check = false;
  std::uint64_t seed = 1;
  int jobs = 1;
};

/// Parses `section.key = value` lines. '#' starts a comment. Unknown keys,
/// duplicates and malformed values throw ConfigError naming the line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError if invariants are violated (t_final, dt > 0, eps in
/// (0, 1/2) and strictly decreasing, grid sizes even and >= 8, ...).
void validate(const ExperimentConfig& c);

std::string preset_name(Preset p);
std::string velocity_mode_name(VelocityMode m);

}  // namespace relaxlim

#endif  // RELAXLIM_CONFIG_HPP_
