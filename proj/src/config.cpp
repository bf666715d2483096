#include "relaxlim/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace relaxlim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

double to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

long long to_integer(std::string_view s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

int to_int(std::string_view s) { return static_cast<int>(to_integer(s)); }

bool to_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("not a boolean: '" + std::string(s) + "'");
}

std::vector<double> to_doubles(std::string_view s) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (auto item : split_list(s)) out.push_back(to_double(item));
  return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"domain.dim", [](auto& c, auto v) { c.dim = to_int(v); }},
      {"domain.n",
       [](auto& c, auto v) {
         c.n.clear();
         for (auto item : split_list(v)) c.n.push_back(to_int(item));
       }},
      {"domain.length", [](auto& c, auto v) { c.length = to_doubles(v); }},
      {"time.t_final", [](auto& c, auto v) { c.t_final = to_double(v); }},
      {"time.dt", [](auto& c, auto v) { c.dt = to_double(v); }},
      {"time.stride", [](auto& c, auto v) { c.stride = to_int(v); }},
      {"time.probe_dt", [](auto& c, auto v) { c.probe_dt = to_double(v); }},
      {"physics.eps", [](auto& c, auto v) { c.eps_list = {to_double(v)}; }},
      {"physics.eps_list", [](auto& c, auto v) { c.eps_list = to_doubles(v); }},
      {"init.preset",
       [](auto& c, auto v) {
         if (v == "constant") c.preset = Preset::kConstant;
         else if (v == "equator") c.preset = Preset::kEquator;
         else if (v == "twisted") c.preset = Preset::kTwisted;
         else throw ConfigError("unknown preset '" + std::string(v) + "'");
       }},
      {"init.theta0_amplitude", [](auto& c, auto v) { c.theta0_amplitude = to_double(v); }},
      {"init.theta0_wavenumber", [](auto& c, auto v) { c.theta0_wavenumber = to_int(v); }},
      {"init.theta1_mode",
       [](auto& c, auto v) {
         if (v == "explicit") c.theta1_mode = VelocityMode::kExplicit;
         else if (v == "well_prepared") c.theta1_mode = VelocityMode::kWellPrepared;
         else if (v == "zero") c.theta1_mode = VelocityMode::kZero;
         else throw ConfigError("unknown theta1_mode '" + std::string(v) + "'");
       }},
      {"init.theta1_amplitude", [](auto& c, auto v) { c.theta1_amplitude = to_double(v); }},
      {"init.twist_a", [](auto& c, auto v) { c.twist_a = to_double(v); }},
      {"init.twist_b", [](auto& c, auto v) { c.twist_b = to_double(v); }},
      {"output.dir", [](auto& c, auto v) { c.output_dir = std::string(v); }},
      {"run.heat", [](auto& c, auto v) { c.run_heat = to_bool(v); }},
      {"run.wave", [](auto& c, auto v) { c.run_wave = to_bool(v); }},
      {"run.remainder_diagnostics",
       [](auto& c, auto v) { c.run_remainder_diagnostics = to_bool(v); }},
      {"run.decomposition_check",
       [](auto& c, auto v) { c.run_decomposition_check = to_bool(v); }},
      {"run.seed",
       [](auto& c, auto v) {
         const long long s = to_integer(v);
         if (s < 0) throw ConfigError("seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"run.jobs", [](auto& c, auto v) { c.jobs = to_int(v); }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;

    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'section.key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + "unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
    }
    try {
      it->second(c, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  // A single n or length applies to every axis.
  if (c.n.size() == 1 && c.dim > 1) c.n.assign(c.dim, c.n.front());
  if (c.length.size() == 1 && c.dim > 1) c.length.assign(c.dim, c.length.front());
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate(const ExperimentConfig& c) {
  if (c.dim < 1 || c.dim > 3) throw ConfigError("domain.dim must be 1, 2 or 3");
  if (static_cast<int>(c.n.size()) != c.dim) {
    throw ConfigError("domain.n needs one entry or one per axis");
  }
  for (int n : c.n) {
    if (n < 8 || n % 2 != 0) throw ConfigError("domain.n must be even and >= 8");
  }
  if (!c.length.empty()) {
    if (static_cast<int>(c.length.size()) != c.dim) {
      throw ConfigError("domain.length needs one entry or one per axis");
    }
    for (double l : c.length) {
      if (!(l > 0.0)) throw ConfigError("domain.length must be positive");
    }
  }
  if (!(c.t_final > 0.0)) throw ConfigError("time.t_final must be positive");
  if (!(c.dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (c.stride < 1) throw ConfigError("time.stride must be >= 1");
  if (!(c.probe_dt >= 0.0)) throw ConfigError("time.probe_dt must be nonnegative");
  for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
    const double e = c.eps_list[i];
    if (!(e > 0.0 && e < 0.5)) throw ConfigError("eps values must lie in (0, 1/2)");
    if (i > 0 && !(e < c.eps_list[i - 1])) {
      throw ConfigError("physics.eps_list must be strictly decreasing");
    }
  }
  if (c.theta0_wavenumber < 0) throw ConfigError("init.theta0_wavenumber must be >= 0");
  if (c.jobs < 1) throw ConfigError("run.jobs must be >= 1");
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::kConstant: return "constant";
    case Preset::kEquator: return "equator";
    case Preset::kTwisted: return "twisted";
  }
  return "?";
}

std::string velocity_mode_name(VelocityMode m) {
  switch (m) {
    case VelocityMode::kExplicit: return "explicit";
    case VelocityMode::kWellPrepared: return "well_prepared";
    case VelocityMode::kZero: return "zero";
  }
  return "?";
}

}  // namespace relaxlim
