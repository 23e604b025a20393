// SPDX-License-Identifier: Apache-2.0
#include "tentflow/cli.hpp"

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tentflow/checkpoint.hpp"
#include "tentflow/parallel.hpp"
#include "tentflow/report_io.hpp"

namespace tentflow {
namespace {

namespace fs = std::filesystem;

Ensemble make_ensemble(const RunConfig& c, EnsembleKind kind, int components) {
  Ensemble e;
  e.seed = c.ensemble.seed;
  e.size = c.ensemble.size;
  e.roughness = c.ensemble.roughness;
  e.kind = kind;
  e.components = components;
  return e;
}

class VerifyRun {
 public:
  VerifyRun(const RunConfig& c, std::ostream& log) : c_(c), log_(log), out_(c.output_dir) {
    grid_.dim = c.grid.dim;
    grid_.L = c.grid.L;
    grid_.n = c.grid.n;
  }

  int execute() {
    const std::string& id = c_.verify.id;
    const bool all = id == "all";
    const double a = c_.verify.alpha;
    const int d = grid_.dim;
    if (all || id == "lemma_timederiv") add(check_lemma_timederiv(ens(EnsembleKind::localized_bumps, 1), a, grid_));
    if (all || id == "maxreg") {
      std::vector<InequalityReport> family;
      for (double b : {0.0, 0.5, 0.9}) family.push_back(add(check_maxreg_bound(ens(EnsembleKind::band_limited_random, 1), b, grid_)));
      series_.push_back(cemp_vs_param(family, "beta"));
    }
    if (all || id == "leray") {
      std::vector<InequalityReport> family;
      for (double b : {0.0, 1.0, 1.9}) family.push_back(add(check_leray_tent(ens(EnsembleKind::band_limited_random, d), b, grid_)));
      series_.push_back(cemp_vs_param(family, "beta"));
    }
    if (all || id == "gradient_product")
      for (auto& r : check_gradient_and_product(ens(EnsembleKind::localized_bumps, d), a, grid_)) add(std::move(r));
    if (all || id == "key_inequalities")
      for (auto& r : check_key_inequalities(ens(EnsembleKind::localized_bumps, 1), a, grid_)) add(std::move(r));
    if (all || id == "bilinear") add(check_bilinear(ens(EnsembleKind::band_limited_random, 2), grid_));
    if (all || id == "embeddings")
      for (auto& r : check_embeddings(ens(EnsembleKind::slobodeckij_rough, 1), ens(EnsembleKind::band_limited_random, 1), a, grid_))
        add(std::move(r));
    if (all || id == "mollification")
      add(check_mollification(ens(EnsembleKind::slobodeckij_rough, 1), a, grid_, c_.verify.k_max));
    if (all || id == "offdiagonal") offdiagonal();
    if (all || id == "scaling") scaling();
    emit_plot_data(series_, out_);
    write_text(out_ / "summary.json", summary_.dump(2) + "\n");
    return failed_ ? kExitFailed : kExitOk;
  }

 private:
  Ensemble ens(EnsembleKind kind, int components) const { return make_ensemble(c_, kind, components); }

  InequalityReport add(InequalityReport r) {
    const std::string stem = report_stem(r);
    write_text(out_ / (stem + ".json"), to_json(r));
    write_text(out_ / (stem + "_samples.csv"), samples_csv(r));
    series_.push_back(cemp_vs_n(r));
    const bool ok = r.verdict == Verdict::bounded_stable;
    failed_ = failed_ || !ok;
    summary_.push_back({{"report", stem}, {"c_emp", r.c_emp}, {"verdict", to_string(r.verdict)}});
    log_ << std::left << std::setw(30) << stem << " C_emp";
    for (const auto& run : r.runs) log_ << " N=" << run.n << ":" << run.c_emp;
    log_ << "  " << to_string(r.verdict) << std::endl;
    return r;
  }

  void offdiagonal() {
    const PeriodicGrid g(grid_.dim, grid_.L, c_.verify.offdiagonal_n);
    Ensemble e = ens(EnsembleKind::band_limited_random, 1);
    const ScalarField f = e.sample(g, 0)[0];
    OffDiagonalGeometry geom;
    geom.x0 = {0.5 * grid_.L, 0.5 * grid_.L, 0.5 * grid_.L};
    geom.r = grid_.L / 64.0;
    const int js[] = {2, 3, 4};
    const OffDiagonalReport r = check_offdiagonal(f, 2.0, geom, js);
    write_text(out_ / "offdiagonal.json", to_json(r));
    write_text(out_ / "offdiagonal_samples.csv", samples_csv(r));
    PlotSeries s{"offdiagonal_ratio_vs_x", "x", "ratio", {}};
    for (const auto& p : r.points) s.points.emplace_back(p.x, p.ratio());
    series_.push_back(std::move(s));
    failed_ = failed_ || !r.pass;
    summary_.push_back({{"report", "offdiagonal"}, {"slope", r.slope}, {"verdict", r.pass ? "PASS" : "FAIL"}});
    log_ << std::left << std::setw(30) << "offdiagonal" << " slope " << r.slope << " bound " << r.bound << "  "
         << (r.pass ? "PASS" : "FAIL") << std::endl;
  }

  void scaling() {
    constexpr double kTolerance = 0.05;
    const PeriodicGrid g(grid_.dim, grid_.L, c_.verify.scaling_n);
    const double lambdas[] = {0.5, 1.0, 2.0};
    const ScalingReport r = check_scaling(preset_scalar("bump", g), c_.verify.alpha, lambdas);
    write_text(out_ / "scaling.json", to_json(r, kTolerance));
    write_text(out_ / "scaling_samples.csv", samples_csv(r));
    PlotSeries s{"scaling_deviation_vs_lambda", "lambda", "deviation", {}};
    for (const auto& row : r.rows) s.points.emplace_back(row.lambda, row.deviation);
    series_.push_back(std::move(s));
    const bool ok = r.max_deviation < kTolerance;
    failed_ = failed_ || !ok;
    summary_.push_back({{"report", "scaling"}, {"max_deviation", r.max_deviation}, {"verdict", ok ? "PASS" : "FAIL"}});
    log_ << std::left << std::setw(30) << "scaling" << " max deviation " << r.max_deviation << "  " << (ok ? "PASS" : "FAIL")
         << "\n";
  }

  const RunConfig& c_;
  std::ostream& log_;
  fs::path out_;
  CampaignGrid grid_;
  std::vector<PlotSeries> series_;
  nlohmann::ordered_json summary_ = nlohmann::ordered_json::array();
  bool failed_ = false;
};

int run_norm(const RunConfig& c, std::ostream& log) {
  VectorField f = c.inputs.empty() ? VectorField({preset_scalar(c.norm.preset, PeriodicGrid(c.grid.dim, c.grid.L, c.grid.n),
                                                                c.ensemble.seed)})
                                   : read_field(c.inputs.front());
  const BallFamily balls = BallFamily::standard(f.grid(), c.balls.center_stride, c.balls.j_max);
  NormReport r;
  if (c.norm.family == "U") r = u_alpha_norm(f, c.norm.param, balls, c.time.time_nodes);
  else if (c.norm.family == "BMO") r = bmo_minus1_norm(f, balls, c.time.time_nodes);
  else r = v_alpha_norm(f, c.norm.param, balls);
  write_text(fs::path(c.output_dir) / ("norm_" + c.norm.family + ".json"), to_json(r));
  log << r.family << "(" << r.param << ") = " << std::setprecision(10) << r.value << "  at radius " << r.argmax_radius
      << ", balls " << r.balls << ", tail share " << r.tail_fraction << "\n";
  return kExitOk;
}

struct SolveOutcome {
  SolveResult result;
  SolverConfig config;
};

SolveOutcome solve_one(const RunConfig& c, const SolverConfig& cfg) {
  const PeriodicGrid g = cfg.grid();
  VectorField u0 = c.inputs.empty() ? preset_velocity(c.solve.preset, g, c.ensemble.seed) : read_field(c.inputs[0]);
  ScalarField rho0 = c.inputs.size() > 1 ? read_field(c.inputs[1])[0] : preset_density(g, c.solve.rho_dev);
  if (!(u0.grid() == g) || u0.component_count() != cfg.dim)
    throw ConfigError("config.inputs[0]: velocity field does not match the solver grid");
  if (!(rho0.grid() == g)) throw ConfigError("config.inputs[1]: density field does not match the solver grid");
  return {solve(u0, rho0, cfg), cfg};
}

void write_solve_artifacts(const RunConfig& c, const SolveOutcome& o, const fs::path& dir) {
  fs::create_directories(dir);
  RunConfig echo = c;
  echo.solver = o.config;
  const std::string cfg_json = to_json(echo);
  write_checkpoint(dir / "velocity.tfc", o.result.state.u_traj, cfg_json);
  write_checkpoint(dir / "density.tfc", o.result.state.rho_traj, cfg_json);
  const fs::path diag = dir / "diagnostics.csv";
  fs::remove(diag);
  append_diagnostics_csv(diag, o.result.state.diagnostics, o.result.state.u_traj.time_grid());
  write_text(dir / "solve_report.json", to_json(o.result, o.config));
  emit_plot_data(solver_series(o.result.state), dir);
}

int run_solve(const RunConfig& c, std::ostream& log) {
  const SolveOutcome o = solve_one(c, c.solver);
  write_solve_artifacts(c, o, c.output_dir);
  log << "solve: " << to_string(o.result.status) << " after " << o.result.state.iterate_index << " iterates, E_alpha total "
      << o.result.e_alpha.total << ", ||u0||_U " << o.result.data.u0_norm << "\n";
  if (!o.result.message.empty()) log << "solve: " << o.result.message << "\n";
  return o.result.status == SolveStatus::diverged ? kExitFailed : kExitOk;
}

int run_sweep(const RunConfig& c, std::ostream& log) {
  std::vector<SolverConfig> cfgs;
  for (int n : c.sweep.ns)
    for (double a : c.sweep.alphas)
      for (double e : c.sweep.eps0s) {
        SolverConfig s = c.solver;
        s.N = n;
        s.alpha = a;
        s.eps0 = e;
        try {
          s.validate();
        } catch (const std::invalid_argument& err) {
          throw ConfigError("config.sweep: run (alpha " + std::to_string(a) + ", eps0 " + std::to_string(e) + ", N " +
                            std::to_string(n) + "): " + err.what());
        }
        cfgs.push_back(s);
      }
  std::vector<std::optional<SolveOutcome>> outcomes(cfgs.size());
  std::vector<fs::path> dirs(cfgs.size());
  parallel_for(cfgs.size(), [&](std::size_t i) {
    std::ostringstream name;
    name << "run_" << std::setw(3) << std::setfill('0') << i;
    dirs[i] = fs::path(c.output_dir) / name.str();
    outcomes[i] = solve_one(c, cfgs[i]);
    write_solve_artifacts(c, *outcomes[i], dirs[i]);
  });
  std::string table = "run,alpha,eps0,N,status,iterations,u0_norm,e_alpha_total,final_increment\n";
  bool diverged = false;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    const SolveResult& r = outcomes[i]->result;
    std::ostringstream row;
    row << std::setprecision(17) << dirs[i].filename().string() << ',' << cfgs[i].alpha << ',' << cfgs[i].eps0 << ','
        << cfgs[i].N << ',' << to_string(r.status) << ',' << r.state.iterate_index << ',' << r.data.u0_norm << ','
        << r.e_alpha.total << ',' << r.state.diagnostics.back().increment << '\n';
    table += row.str();
    diverged = diverged || r.status == SolveStatus::diverged;
    log << dirs[i].filename().string() << ": alpha " << cfgs[i].alpha << " eps0 " << cfgs[i].eps0 << " N " << cfgs[i].N << " -> "
        << to_string(r.status) << "\n";
  }
  write_text(fs::path(c.output_dir) / "sweep.csv", table);
  return diverged ? kExitFailed : kExitOk;
}

}  // namespace

int run(const RunConfig& c, std::ostream& log) {
  c.validate();
  fs::create_directories(c.output_dir);
  write_text(fs::path(c.output_dir) / "run_config.json", to_json(c));
  switch (c.command) {
    case Command::norm: return run_norm(c, log);
    case Command::verify: return VerifyRun(c, log).execute();
    case Command::solve: return run_solve(c, log);
    case Command::sweep: return run_sweep(c, log);
  }
  return kExitInvalid;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"tentflow: tent-space norms, inequality campaigns and a density-dependent Navier-Stokes Picard solver"};
  app.require_subcommand(1, 1);
  std::string config_path, id, preset, out, family;
  std::optional<int> n;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  for (const char* name : {"norm", "verify", "solve", "sweep"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "RunConfig JSON file");
    sub->add_option("--id", id, "inequality id for verify (or 'all')");
    sub->add_option("--preset", preset, "named field preset");
    sub->add_option("--n", n, "grid points per axis");
    sub->add_option("--alpha", alpha, "alpha parameter");
    sub->add_option("--seed", seed, "ensemble seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--input", inputs, "field file(s) in the checkpoint layout");
    sub->add_option("--family", family, "norm family: U, BMO or V");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  try {
    RunConfig c = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    const std::string cmd = app.get_subcommands().front()->get_name();
    for (Command k : {Command::norm, Command::verify, Command::solve, Command::sweep})
      if (to_string(k) == cmd) c.command = k;
    if (!id.empty()) c.verify.id = id;
    if (!preset.empty()) (c.command == Command::norm ? c.norm.preset : c.solve.preset) = preset;
    if (!out.empty()) c.output_dir = out;
    if (!family.empty()) c.norm.family = family;
    if (!inputs.empty()) c.inputs = inputs;
    if (seed) c.ensemble.seed = *seed;
    if (n) (c.command == Command::solve || c.command == Command::sweep ? c.solver.N : c.grid.n) = *n;
    if (alpha) {
      if (c.command == Command::norm) c.norm.param = *alpha;
      else if (c.command == Command::verify) c.verify.alpha = *alpha;
      else c.solver.alpha = *alpha;
    }
    c.validate();
    return run(c, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
}

}  // namespace tentflow
