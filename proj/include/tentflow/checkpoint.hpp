// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tentflow/field.hpp"
#include "tentflow/ns_solver.hpp"
#include "tentflow/time_grid.hpp"

namespace tentflow {

/// Binary layout (little-endian): magic "TENTFLW1"; u32 dim, N, node count, components;
/// f64 L; u64 config length + config JSON bytes; node count f64 times, node count f64
/// weights, node count + 1 f64 edges; then the payload, component-major
/// ([component][node][point]) f64 values.
struct Checkpoint {
  int dim = 2;
  int n = 0;
  double L = 1.0;
  std::string config_json;
  std::vector<double> times;
  std::vector<double> weights;
  std::vector<double> edges;
  std::vector<VectorField> slices;

  /// Rebuilds the trajectory; fails for single-field files written at t = 0.
  SpaceTimeField trajectory() const;
};

void write_checkpoint(const std::filesystem::path& path, const SpaceTimeField& traj, const std::string& config_json);
/// A lone field is stored as one node at t = 0.
void write_field(const std::filesystem::path& path, const VectorField& field, const std::string& config_json = "{}");
Checkpoint read_checkpoint(const std::filesystem::path& path);
/// First node of a checkpoint file.
VectorField read_field(const std::filesystem::path& path);

/// Appends one row per (iteration, node) with columns
/// iter,t,E_alpha_total,rho_dev,energy_lhs,energy_rhs,div_max,increment.
/// The header is written when the file is new or empty.
void append_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRow>& rows,
                            const TimeGrid& time_grid);

}  // namespace tentflow
