// SPDX-License-Identifier: Apache-2.0
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "test_support.hpp"
#include "tentflow/checkpoint.hpp"
#include "tentflow/cli.hpp"
#include "tentflow/heat_ops.hpp"
#include "tentflow/report_io.hpp"

using namespace tentflow;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tentflow_unit_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tentflow");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_run_config(text).validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("RunConfig round-trips through JSON") {
  RunConfig c;
  CHECK(parse_run_config(to_json(c)) == c);
  c.command = Command::sweep;
  c.inputs = {"a.tfc", "b.tfc"};
  c.output_dir = "elsewhere";
  c.grid.n = 128;
  c.solver.eps0 = 0.123456789012345;
  c.solver.t_final = 0.1 / 3.0;
  c.ensemble.seed = 18446744073709551615ull;
  c.sweep.alphas = {0.1, 1.0 / 3.0};
  c.sweep.ns = {16};
  c.verify.id = "maxreg";
  const RunConfig back = parse_run_config(to_json(c));
  CHECK(back == c);
  CHECK(to_json(back) == to_json(c));
  // Missing keys keep defaults.
  const RunConfig partial = parse_run_config(R"({"solver": {"N": 32}})");
  CHECK(partial.solver.N == 32);
  CHECK(partial.solver.eps0 == RunConfig{}.solver.eps0);
}

TEST_CASE("RunConfig rejects unknown keys and bad values with their path") {
  CHECK(error_of(R"({"solver": {"eps": 0.1}})").find("config.solver.eps") != std::string::npos);
  CHECK(error_of(R"({"colour": 1})").find("config.colour: unknown key") != std::string::npos);
  CHECK(error_of(R"({"grid": {"n": "64"}})").find("config.grid.n") != std::string::npos);
  CHECK(error_of(R"({"grid": {"n": 96}})").find("config.grid.n") != std::string::npos);
  CHECK(error_of(R"({"sweep": {"alphas": [0.5, 1.5]}})").find("config.sweep.alphas[1]") != std::string::npos);
  CHECK(error_of(R"({"command": "plot"})").find("config.command") != std::string::npos);
  CHECK(error_of(R"({"solver": {"eps0": -1}})").find("config.solver") != std::string::npos);
  CHECK(error_of(R"({"verify": {"id": "nope"}})").find("config.verify.id") != std::string::npos);
  CHECK(error_of(R"({"inputs": ["/nonexistent/field.tfc"], "command": "norm"})").find("config.inputs[0]") !=
        std::string::npos);
  CHECK(error_of("{not json").find("malformed") != std::string::npos);
  CHECK(error_of("{}").empty());
}

TEST_CASE("checkpoint files round-trip bit for bit") {
  const fs::path dir = scratch("checkpoint");
  const PeriodicGrid g(2, 2.0, 16);
  const TimeGrid tg = make_log_time_grid(1e-3, 1e-1, 5);
  std::vector<VectorField> slices;
  for (std::size_t m = 0; m < tg.size(); ++m) slices.push_back(random_trig_vector(g, 3, static_cast<unsigned>(m + 1)));
  const SpaceTimeField traj(tg, slices);
  write_checkpoint(dir / "t.tfc", traj, R"({"k": 1})");
  const Checkpoint cp = read_checkpoint(dir / "t.tfc");
  CHECK(cp.dim == 2);
  CHECK(cp.n == 16);
  CHECK(cp.L == 2.0);
  CHECK(cp.config_json == R"({"k": 1})");
  const SpaceTimeField back = cp.trajectory();
  REQUIRE(back.size() == traj.size());
  for (std::size_t m = 0; m < traj.size(); ++m) {
    CHECK(back.time_grid().node(m) == tg.node(m));
    CHECK(max_abs_diff(back[m], traj[m]) == 0.0);
  }
  // Header: magic, four u32, one f64, u64 config length; payload is component-major.
  const std::string bytes = slurp(dir / "t.tfc");
  CHECK(bytes.substr(0, 8) == "TENTFLW1");
  const std::size_t header = 8 + 16 + 8 + 8 + 8 + 8 * (3 * tg.size() + 1);
  CHECK(bytes.size() == header + 8 * 2 * tg.size() * g.point_count());
  double first_c1 = 0.0;
  std::memcpy(&first_c1, bytes.data() + header + 8 * tg.size() * g.point_count(), 8);
  CHECK(first_c1 == traj[0][1][0]);

  write_field(dir / "f.tfc", slices[2]);
  CHECK(max_abs_diff(read_field(dir / "f.tfc"), slices[2]) == 0.0);
  CHECK_THROWS(read_checkpoint(dir / "f.tfc").trajectory());

  {
    std::ofstream cut(dir / "cut.tfc", std::ios::binary);
    cut << bytes.substr(0, bytes.size() - 3);
  }
  CHECK_THROWS_AS(read_checkpoint(dir / "cut.tfc"), std::runtime_error);
  {
    std::ofstream bad(dir / "bad.tfc", std::ios::binary);
    bad << "NOTAFILE" << bytes.substr(8);
  }
  CHECK_THROWS_AS(read_checkpoint(dir / "bad.tfc"), std::runtime_error);
  CHECK_THROWS_AS(read_checkpoint(dir / "missing.tfc"), std::runtime_error);
}

TEST_CASE("diagnostics CSV and plot series") {
  const fs::path dir = scratch("series");
  const TimeGrid tg = make_log_time_grid(1e-3, 1e-1, 3);
  DiagnosticsRow row;
  row.iter = 2;
  row.rho_dev = {0.1, 0.09, 0.08};
  row.energy_lhs = {1.0, 0.9, 0.8};
  row.energy_rhs = 1.0;
  row.div_max = {0.0, 0.0, 0.0};
  row.increment = 1e-3;
  append_diagnostics_csv(dir / "d.csv", {row}, tg);
  append_diagnostics_csv(dir / "d.csv", {row}, tg);
  const std::string csv = slurp(dir / "d.csv");
  CHECK(csv.rfind("iter,t,E_alpha_total,rho_dev,energy_lhs,energy_rhs,div_max,increment\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

  const PlotSeries empty{"empty", "beta", "c_emp", {}};
  CHECK(series_csv(empty) == "beta,c_emp\n");
  const auto paths = emit_plot_data(std::vector<PlotSeries>{empty}, dir);
  REQUIRE(paths.size() == 1);
  CHECK(slurp(paths[0]) == "beta,c_emp\n");
  CHECK(slurp(emit_plot_data(InequalityReport{}, dir).front()) == "n,c_emp\n");

  InequalityReport a, b;
  a.id = b.id = "maxreg_bound";
  a.params = {{"beta", 0.0}};
  b.params = {{"beta", 0.5}};
  a.c_emp = 0.9;
  b.c_emp = 0.95;
  const PlotSeries s = cemp_vs_param({a, b}, "beta");
  CHECK(s.name == "maxreg_bound_cemp_vs_beta");
  CHECK(series_csv(s) == "beta,c_emp\n0,0.9\n0.5,0.95\n");
  CHECK(report_stem(b) == "maxreg_bound_beta0.5");
}

TEST_CASE("NormReport JSON is flat with the documented keys") {
  NormReport r;
  r.family = "U";
  r.param = 0.5;
  r.value = 1.25;
  const auto j = nlohmann::json::parse(to_json(r));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"argmax_center", "argmax_radius", "family", "grid_n", "param", "time_nodes", "value"});
  CHECK(j["value"] == 1.25);
}

TEST_CASE("presets") {
  const PeriodicGrid g(2, 1.0, 64);
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const VectorField u = preset_velocity(name, g);
    CHECK(u.component_count() == 2);
    CHECK(divergence(u).max_abs() < 1e-10 * (1.0 + u.max_abs()));
    CHECK(std::isfinite(preset_scalar(name, g).max_abs()));
  }
  CHECK(preset_velocity("zero", g).max_abs() == 0.0);
  CHECK(preset_density(g, 0.1).max_abs() == doctest::Approx(1.1));
  CHECK_THROWS_AS(preset_scalar("vortex", g), ConfigError);
  CHECK_THROWS_AS(preset_scalar("rough", PeriodicGrid(2, 1.0, 32)), std::invalid_argument);
}

TEST_CASE("cli: solve --preset zero converges to a zero checkpoint") {
  const fs::path dir = scratch("solve_zero");
  REQUIRE(run_cli({"solve", "--preset", "zero", "--n", "32", "--out", dir.string()}) == kExitOk);
  const auto report = nlohmann::json::parse(slurp(dir / "solve_report.json"));
  CHECK(report["status"] == "CONVERGED");
  const SpaceTimeField u = read_checkpoint(dir / "velocity.tfc").trajectory();
  CHECK(u.l2_norm() == 0.0);
  CHECK(parse_run_config(read_checkpoint(dir / "velocity.tfc").config_json).solver.N == 32);
  CHECK(parse_run_config(slurp(dir / "run_config.json")).command == Command::solve);
  CHECK(slurp(dir / "rho_dev_vs_t.csv").rfind("t,rho_dev\n", 0) == 0);
}

TEST_CASE("cli: validation errors exit with 1 before any output") {
  const fs::path dir = scratch("invalid");
  CHECK(run_cli({"verify", "--id", "nonsense", "--out", (dir / "a").string()}) == kExitInvalid);
  CHECK_FALSE(fs::exists(dir / "a"));
  CHECK(run_cli({"solve", "--n", "48", "--out", (dir / "b").string()}) == kExitInvalid);
  CHECK(run_cli({"frobnicate"}) == kExitInvalid);
  CHECK(run_cli({}) == kExitInvalid);
  std::ofstream(dir / "cfg.json") << R"({"solver": {"picard": 3}})";
  CHECK(run_cli({"solve", "--config", (dir / "cfg.json").string()}) == kExitInvalid);
}

TEST_CASE("cli: norm of a field file matches the library") {
  const fs::path dir = scratch("norm");
  const PeriodicGrid g(2, 1.0, 32);
  const ScalarField f = random_trig(g, 3, 11u);
  write_field(dir / "f.tfc", VectorField({f}));
  REQUIRE(run_cli({"norm", "--input", (dir / "f.tfc").string(), "--alpha", "0.25", "--out", dir.string()}) == kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "norm_U.json"));
  CHECK(j["value"].get<double>() == u_alpha_norm(f, 0.25, BallFamily::standard(g)).value);
  CHECK(j["grid_n"] == 32);
}

TEST_CASE("cli: verify --id scaling is byte-deterministic") {
  const fs::path a = scratch("scaling_a");
  const fs::path b = scratch("scaling_b");
  REQUIRE(run_cli({"verify", "--id", "scaling", "--seed", "7", "--out", a.string()}) == kExitOk);
  REQUIRE(run_cli({"verify", "--id", "scaling", "--seed", "7", "--out", b.string()}) == kExitOk);
  for (const char* f : {"scaling.json", "scaling_samples.csv", "summary.json", "scaling_deviation_vs_lambda.csv"})
    CHECK(slurp(a / f) == slurp(b / f));
  CHECK(nlohmann::json::parse(slurp(a / "scaling.json"))["verdict"] == "PASS");
}
