// SPDX-License-Identifier: Apache-2.0
#include "tentflow/report_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace tentflow {
namespace {

using nlohmann::ordered_json;

// Shortest round-trip decimal form, locale independent.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ordered_json params_json(const std::vector<std::pair<std::string, double>>& params) {
  ordered_json p = ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  return p;
}

}  // namespace

std::string to_json(const NormReport& r) {
  const ordered_json j{{"family", r.family},
                       {"param", r.param},
                       {"value", r.value},
                       {"argmax_center", r.argmax_center},
                       {"argmax_radius", r.argmax_radius},
                       {"grid_n", r.grid_n},
                       {"time_nodes", r.time_nodes}};
  return j.dump(2) + "\n";
}

std::string to_json(const InequalityReport& r) {
  ordered_json runs = ordered_json::array();
  for (const auto& run : r.runs) {
    std::size_t skipped = 0;
    for (const auto& s : run.samples) skipped += s.skipped ? 1 : 0;
    runs.push_back({{"n", run.n}, {"samples", run.samples.size()}, {"skipped", skipped}, {"c_emp", run.c_emp}});
  }
  const double drift = r.runs.size() == 2 && r.runs[0].c_emp > 0.0 ? r.runs[1].c_emp / r.runs[0].c_emp - 1.0 : 0.0;
  const ordered_json j{{"inequality_id", r.id}, {"params", params_json(r.params)}, {"runs", runs},
                       {"c_emp", r.c_emp},      {"drift", drift},                 {"verdict", to_string(r.verdict)}};
  return j.dump(2) + "\n";
}

std::string to_json(const OffDiagonalReport& r) {
  const ordered_json j{{"inequality_id", "offdiagonal"}, {"n_exp", r.n_exp},       {"points", r.points.size()},
                       {"slope", r.slope},               {"bound", r.bound},       {"fitted_c", r.fitted_c},
                       {"verdict", r.pass ? "PASS" : "FAIL"}};
  return j.dump(2) + "\n";
}

std::string to_json(const ScalingReport& r, double tolerance) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"lambda", row.lambda}, {"norm", row.norm}, {"scaled_norm", row.scaled_norm}, {"deviation", row.deviation}});
  const ordered_json j{{"inequality_id", "scaling"},
                       {"alpha", r.alpha},
                       {"rows", rows},
                       {"max_deviation", r.max_deviation},
                       {"tolerance", tolerance},
                       {"verdict", r.max_deviation < tolerance ? "PASS" : "FAIL"}};
  return j.dump(2) + "\n";
}

std::string to_json(const SolveResult& res, const SolverConfig& cfg) {
  const EAlphaReport& e = res.e_alpha;
  const DiagnosticsRow* last = res.state.diagnostics.empty() ? nullptr : &res.state.diagnostics.back();
  double div_max = 0.0;
  if (last)
    for (double d : last->div_max) div_max = std::max(div_max, d);
  const ordered_json j{
      {"status", to_string(res.status)},
      {"message", res.message},
      {"iterations", res.state.iterate_index},
      {"N", cfg.N},
      {"alpha", cfg.alpha},
      {"eps0", cfg.eps0},
      {"t_final", cfg.t_final},
      {"time_nodes", res.state.u_traj.size()},
      {"u0_raw_norm", res.data.raw_norm},
      {"u0_norm", res.data.u0_norm},
      {"c_moll", res.data.c_moll},
      {"rescale_factor", res.data.rescale_factor},
      {"rho_dev", res.data.rho_dev},
      {"e_alpha",
       {{"dt_norm", e.dt_norm},
        {"lap_norm", e.lap_norm},
        {"grad_norm", e.grad_norm},
        {"sqrt_t_sup", e.sqrt_t_sup},
        {"besov_sup", e.besov_sup},
        {"total", e.total},
        {"dt_rel_error", e.dt_rel_error},
        {"dt_underresolved", e.dt_underresolved}}},
      {"final_increment", last ? last->increment : 0.0},
      {"div_max", div_max},
  };
  return j.dump(2) + "\n";
}

std::string report_stem(const InequalityReport& r) {
  std::string s = r.id;
  if (r.id == "maxreg_bound" || r.id == "leray_tent")
    for (const auto& [k, v] : r.params) s += "_" + k + num(v);
  return s;
}

std::string samples_csv(const InequalityReport& r) {
  std::string out = "n,index,lhs,rhs,ratio,skipped\n";
  for (const auto& run : r.runs)
    for (const auto& s : run.samples) {
      const double ratio = s.skipped ? 0.0 : s.lhs / s.rhs;
      out += std::to_string(run.n) + "," + std::to_string(s.index) + "," + num(s.lhs) + "," + num(s.rhs) + "," +
             num(ratio) + "," + (s.skipped ? "1" : "0") + "\n";
    }
  return out;
}

std::string samples_csv(const OffDiagonalReport& r) {
  std::string out = "j,theta,x,lhs,f_mass,ratio\n";
  for (const auto& p : r.points)
    out += std::to_string(p.j) + "," + num(p.theta) + "," + num(p.x) + "," + num(p.lhs) + "," + num(p.f_mass) + "," +
           num(p.ratio()) + "\n";
  return out;
}

std::string samples_csv(const ScalingReport& r) {
  std::string out = "lambda,norm,scaled_norm,deviation\n";
  for (const auto& row : r.rows)
    out += num(row.lambda) + "," + num(row.norm) + "," + num(row.scaled_norm) + "," + num(row.deviation) + "\n";
  return out;
}

PlotSeries cemp_vs_n(const InequalityReport& r) {
  PlotSeries s{report_stem(r) + "_cemp_vs_n", "n", "c_emp", {}};
  for (const auto& run : r.runs) s.points.emplace_back(run.n, run.c_emp);
  return s;
}

PlotSeries cemp_vs_param(const std::vector<InequalityReport>& reports, const std::string& param) {
  PlotSeries s{(reports.empty() ? std::string("empty") : reports.front().id) + "_cemp_vs_" + param, param, "c_emp", {}};
  for (const auto& r : reports)
    for (const auto& [k, v] : r.params)
      if (k == param) s.points.emplace_back(v, r.c_emp);
  return s;
}

std::vector<PlotSeries> solver_series(const SolverState& state) {
  PlotSeries e{"e_alpha_total_vs_iter", "iter", "e_alpha_total", {}};
  PlotSeries inc{"increment_vs_iter", "iter", "increment", {}};
  PlotSeries rho{"rho_dev_vs_t", "t", "rho_dev", {}};
  for (const auto& row : state.diagnostics) {
    e.points.emplace_back(row.iter, row.e_alpha.total);
    if (row.iter > 0) inc.points.emplace_back(row.iter, row.increment);
  }
  if (!state.diagnostics.empty()) {
    const auto& dev = state.diagnostics.back().rho_dev;
    for (std::size_t m = 0; m < dev.size() && m < state.rho_traj.size(); ++m)
      rho.points.emplace_back(state.rho_traj.time_grid().node(m), dev[m]);
  }
  return {e, inc, rho};
}

std::string series_csv(const PlotSeries& s) {
  std::string out = s.x_label + "," + s.y_label + "\n";
  for (const auto& [x, y] : s.points) out += num(x) + "," + num(y) + "\n";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::vector<std::filesystem::path> emit_plot_data(const std::vector<PlotSeries>& series, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (const auto& s : series) {
    paths.push_back(dir / (s.name + ".csv"));
    write_text(paths.back(), series_csv(s));
  }
  return paths;
}

std::vector<std::filesystem::path> emit_plot_data(const InequalityReport& report, const std::filesystem::path& dir) {
  return emit_plot_data(std::vector<PlotSeries>{cemp_vs_n(report)}, dir);
}

}  // namespace tentflow
