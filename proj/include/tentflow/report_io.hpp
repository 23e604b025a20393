// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tentflow/ns_solver.hpp"
#include "tentflow/tent_norms.hpp"
#include "tentflow/verify_harness.hpp"

namespace tentflow {

/// Flat object with keys family, param, value, argmax_center, argmax_radius, grid_n, time_nodes.
std::string to_json(const NormReport& report);
std::string to_json(const InequalityReport& report);
std::string to_json(const OffDiagonalReport& report);
std::string to_json(const ScalingReport& report, double tolerance);
std::string to_json(const SolveResult& result, const SolverConfig& config);

/// File stem of a campaign report: the id followed by its parameters, e.g. "maxreg_bound_beta0.5".
std::string report_stem(const InequalityReport& report);

/// Per-sample table: n,index,lhs,rhs,ratio,skipped.
std::string samples_csv(const InequalityReport& report);
/// Measurement table: j,theta,x,lhs,f_mass,ratio.
std::string samples_csv(const OffDiagonalReport& report);
/// Row table: lambda,norm,scaled_norm,deviation.
std::string samples_csv(const ScalingReport& report);

struct PlotSeries {
  std::string name;  ///< file stem
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
};

/// C_emp against N for one campaign report.
PlotSeries cemp_vs_n(const InequalityReport& report);
/// C_emp against one parameter across reports of the same id, e.g. beta for maxreg_bound.
PlotSeries cemp_vs_param(const std::vector<InequalityReport>& reports, const std::string& param);
/// E_alpha total and Picard increment against iteration; max|rho - 1| against t at the last iterate.
std::vector<PlotSeries> solver_series(const SolverState& state);

/// Two-column CSV, header "x_label,y_label"; an empty series gives the header only.
std::string series_csv(const PlotSeries& series);
/// Writes <dir>/<name>.csv for each series and returns the paths.
std::vector<std::filesystem::path> emit_plot_data(const std::vector<PlotSeries>& series, const std::filesystem::path& dir);
std::vector<std::filesystem::path> emit_plot_data(const InequalityReport& report, const std::filesystem::path& dir);

/// Writes text to path, replacing any existing file.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace tentflow
