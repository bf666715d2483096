// relaxlim: command line front end for the heat-flow / damped-wave-map lab.

#include "relaxlim/config.hpp"
#include "relaxlim/csv.hpp"
#include "relaxlim/limit_study.hpp"
#include "relaxlim/rate_fit.hpp"
#include "relaxlim/scalar_oracle.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace relaxlim;

namespace {

void print_summary(const std::filesystem::path& dir) {
  std::ifstream in(dir / "summary.txt");
  std::cout << in.rdbuf();
}

int cmd_run(const std::string& config_path) {
  ExperimentConfig c = load_config(config_path);
  if (c.eps_list.empty()) throw ConfigError("run needs physics.eps");
  c.eps_list.resize(1);
  std::filesystem::create_directories(c.output_dir);
  const std::filesystem::path dir = c.output_dir;
  StudyReport report = run_limit_study(c, &dir);
  write_run_traces(report.runs.front(), dir);
  emit_report(report, dir);
  print_summary(dir);
  return report.runs.front().status == "ok" ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, int jobs) {
  ExperimentConfig c = load_config(config_path);
  if (jobs > 0) c.jobs = jobs;
  const StudyReport report = run_limit_study(c);
  emit_report(report, c.output_dir);
  print_summary(c.output_dir);
  return 0;
}

int cmd_oracle(int k, double eps, double a, double b, double t, const std::string& rates,
               const std::vector<double>& eps_list, double t_final) {
  const auto g = damped_mode(ScalarModeIC<double>{static_cast<double>(k), a, b, eps}, t);
  const auto layer = scalar_layer_mode(static_cast<double>(k), a, b, eps, t);
  std::cout << "damped value    " << format_number(g.value) << "\n"
            << "damped velocity " << format_number(g.velocity) << "\n"
            << "heat value      " << format_number(heat_mode(static_cast<double>(k), a, t)) << "\n"
            << "layer value     " << format_number(layer.value) << "\n"
            << "layer velocity  " << format_number(layer.velocity) << "\n";
  if (!rates.empty()) {
    const ScalarRateStudy s = scalar_limit_study({{k, a}}, {{k, b}}, eps_list, t_final);
    CsvWriter csv(rates, "eps,err_pos,err_vel");
    for (const auto& r : s.rows) csv.row({r.eps, r.err_pos, r.err_vel});
    csv.stream() << "slope_pos,slope_vel,residual\n";
    csv.row({s.fit_pos.slope, s.fit_vel.slope, std::max(s.fit_pos.residual, s.fit_vel.residual)});
    std::cout << "slope_pos " << format_number(s.fit_pos.slope) << "\nslope_vel "
              << format_number(s.fit_vel.slope) << "\n";
  }
  return 0;
}

int cmd_verify_decomposition(std::uint64_t seed, int n, int dim, double tol) {
  double worst = 0.0;
  for (const auto& c : verify_decomposition(seed, n, dim)) {
    std::printf("eps %-6g t %-8g deviation %.3e\n", c.eps, c.t, c.deviation);
    worst = std::max(worst, c.deviation);
  }
  std::printf("max deviation %.3e (tolerance %.1e): %s\n", worst, tol,
              worst <= tol ? "ok" : "FAILED");
  return worst <= tol ? 0 : 1;
}

int cmd_fit_rates(const std::string& input) {
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot open " + input);
  std::string line;
  std::getline(in, line);
  if (line.rfind("eps,sup_pos_err,sup_vel_err", 0) != 0) {
    throw std::runtime_error("unexpected header in " + input);
  }
  std::vector<RatePoint> pos;
  std::vector<RatePoint> vel;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 9) throw std::runtime_error("malformed row: " + line);
    if (cells[8] != "ok") continue;
    const double eps = std::stod(cells[0]);
    const double ep = std::stod(cells[1]);
    const double ev = std::stod(cells[2]);
    if (!std::isfinite(ep) || !std::isfinite(ev)) continue;
    pos.push_back({eps, ep});
    vel.push_back({eps, ev});
  }
  const auto show = [](const char* name, const std::vector<RatePoint>& pts) {
    if (pts.size() < 2) {
      std::cout << name << ": not enough points\n";
      return;
    }
    const RateFit f = rate_fit(pts);
    if (f.exact_zero) {
      std::cout << name << ": exact zero\n";
    } else {
      std::cout << name << ": slope " << format_number(f.slope) << " intercept "
                << format_number(f.intercept) << " residual " << format_number(f.residual) << "\n";
    }
  };
  show("position", pos);
  show("velocity", vel);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat flow, damped wave maps into the sphere and their initial layer"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "single eps run with snapshots and traces");
  run->add_option("--config", config_path, "experiment config")->required();

  int jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "eps sweep with rate fits and report");
  sweep->add_option("--config", config_path, "experiment config")->required();
  sweep->add_option("--jobs", jobs, "concurrent eps runs (overrides run.jobs)");

  int k = 1;
  double eps = 0.1, a = 1.0, b = 0.0, t = 1.0, t_final = 1.0;
  std::string rates;
  std::vector<double> eps_list{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  auto* oracle = app.add_subcommand("oracle", "exact scalar mode solutions");
  oracle->add_option("--k", k, "wavenumber")->required();
  oracle->add_option("--eps", eps, "inertia eps")->required();
  oracle->add_option("--a", a, "initial value");
  oracle->add_option("--b", b, "initial velocity");
  oracle->add_option("--t", t, "time");
  oracle->add_option("--rates", rates, "write scalar_rates.csv for the mode to this path");
  oracle->add_option("--eps-list", eps_list, "eps values for --rates")->delimiter(',');
  oracle->add_option("--t-final", t_final, "horizon for --rates");

  std::uint64_t seed = 1;
  int n = 32, dim = 2;
  double tol = 1e-11;
  auto* verify = app.add_subcommand("verify-decomposition",
                                    "S + R against the assembled remainder equation");
  verify->add_option("--seed", seed, "random seed")->required();
  verify->add_option("--n", n, "points per axis")->required();
  verify->add_option("--dim", dim, "dimension");
  verify->add_option("--tol", tol, "relative tolerance");

  std::string input;
  auto* fit = app.add_subcommand("fit-rates", "log-log slopes from a study.csv");
  fit->add_option("--input", input, "study.csv")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path);
    if (*sweep) return cmd_sweep(config_path, jobs);
    if (*oracle) return cmd_oracle(k, eps, a, b, t, rates, eps_list, t_final);
    if (*verify) return cmd_verify_decomposition(seed, n, dim, tol);
    if (*fit) return cmd_fit_rates(input);
  } catch (const std::exception& e) {
    std::cerr << "relaxlim: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
