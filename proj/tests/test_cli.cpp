#include "relaxlim/config.hpp"
#include "relaxlim/field_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace relaxlim;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string output;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(RELAXLIM_CLI) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) r.output += buf;
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("relaxlim_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string small_config(const fs::path& out, const std::string& eps) {
  return "domain.n = 32\ntime.t_final = 0.2\ntime.dt = 2e-3\nphysics.eps_list = " + eps +
         "\noutput.dir = " + out.string() + "\n";
}

}  // namespace

TEST(Cli, ShippedConfigsParse) {
  int count = 0;
  for (const auto& e : fs::directory_iterator(RELAXLIM_CONFIG_DIR)) {
    if (e.path().extension() != ".cfg") continue;
    EXPECT_NO_THROW(load_config(e.path())) << e.path();
    ++count;
  }
  EXPECT_GE(count, 4);
}

TEST(Cli, OracleAndRates) {
  const fs::path dir = scratch("oracle");
  const Result r = cli("oracle --k 1 --eps 0.25 --a 1 --b 0 --t 0.5 --rates " +
                       (dir / "scalar_rates.csv").string() + " --eps-list 1e-1,1e-2,1e-3,1e-4");
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("damped value"), std::string::npos);
  EXPECT_NE(r.output.find("slope_pos 1"), std::string::npos);
  std::ifstream in(dir / "scalar_rates.csv");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines.front(), "eps,err_pos,err_vel");
  EXPECT_EQ(lines[5], "slope_pos,slope_vel,residual");
  fs::remove_all(dir);
}

TEST(Cli, VerifyDecomposition) {
  const Result ok = cli("verify-decomposition --seed 3 --n 16");
  EXPECT_EQ(ok.status, 0) << ok.output;
  EXPECT_NE(ok.output.find(": ok"), std::string::npos);
  const Result strict = cli("verify-decomposition --seed 3 --n 16 --tol 0");
  EXPECT_EQ(strict.status, 1);
}

TEST(Cli, RunWritesSnapshotsAndTraces) {
  const fs::path dir = scratch("run");
  write_text(dir / "run.cfg", small_config(dir / "out", "0.05"));
  const Result r = cli("run --config " + (dir / "run.cfg").string());
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("M: "), std::string::npos);
  for (const char* f : {"study.csv", "summary.txt", "heat_trace.csv", "wave_trace.csv",
                        "remainder_trace.csv", "d0_0.rlxf", "deps_0.rlxf", "veps_0.rlxf"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  EXPECT_EQ(read_field(dir / "out" / "deps_0.rlxf").components(), 3);
  fs::remove_all(dir);
}

TEST(Cli, SweepThenFitRates) {
  const fs::path dir = scratch("sweep");
  write_text(dir / "sweep.cfg", small_config(dir / "out", "0.1, 0.03, 0.01"));
  const Result r = cli("sweep --jobs 2 --config " + (dir / "sweep.cfg").string());
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(fs::exists(dir / "out" / "runs" / "eps_0.03" / "remainder_trace.csv"));
  const Result fit = cli("fit-rates --input " + (dir / "out" / "study.csv").string());
  ASSERT_EQ(fit.status, 0) << fit.output;
  EXPECT_NE(fit.output.find("position: slope"), std::string::npos);
  EXPECT_NE(fit.output.find("velocity: slope"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, BadInputFailsCleanly) {
  const fs::path dir = scratch("bad");
  write_text(dir / "bad.cfg", "domain.n = 32\ndomain.colour = blue\n");
  const Result r = cli("sweep --config " + (dir / "bad.cfg").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("line 2"), std::string::npos);
  EXPECT_EQ(cli("fit-rates --input " + (dir / "missing.csv").string()).status, 2);
  EXPECT_NE(cli("").status, 0);
  fs::remove_all(dir);
}
