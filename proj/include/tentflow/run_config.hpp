// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "tentflow/field.hpp"
#include "tentflow/ns_solver.hpp"

namespace tentflow {

/// Invalid configuration; the message starts with the offending path, e.g. "config.solver.eps0".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { norm, verify, solve, sweep };
std::string to_string(Command command);

struct GridSection {
  int dim = 2;
  double L = 1.0;
  int n = 64;  ///< norm: preset resolution; verify: base resolution of the campaigns
  bool operator==(const GridSection&) const = default;
};

struct BallSection {
  int center_stride = 0;  ///< 0 = N/8
  int j_max = 5;
  bool operator==(const BallSection&) const = default;
};

struct TimeSection {
  int time_nodes = 0;  ///< 0 = default tent grid
  bool operator==(const TimeSection&) const = default;
};

struct EnsembleSection {
  std::uint64_t seed = 7;
  int size = 50;
  double roughness = 0.8;
  bool operator==(const EnsembleSection&) const = default;
};

struct NormSection {
  std::string family = "U";  ///< U, BMO or V
  double param = 0.5;        ///< alpha for U and V
  std::string preset = "bump";
  bool operator==(const NormSection&) const = default;
};

struct VerifySection {
  std::string id = "all";
  double alpha = 0.5;
  int k_max = 20;
  int offdiagonal_n = 1024;
  int scaling_n = 128;
  bool operator==(const VerifySection&) const = default;
};

struct SolveSection {
  std::string preset = "single-mode";
  double rho_dev = 0.05;  ///< amplitude of the preset density perturbation
  bool operator==(const SolveSection&) const = default;
};

struct SweepSection {
  std::vector<double> alphas{0.25, 0.5, 0.75};
  std::vector<double> eps0s{0.1, 0.5};
  std::vector<int> ns{32, 64};
  bool operator==(const SweepSection&) const = default;
};

struct RunConfig {
  Command command = Command::verify;
  std::vector<std::string> inputs;
  std::string output_dir = "tentflow_out";
  GridSection grid;
  BallSection balls;
  TimeSection time;
  SolverConfig solver;
  EnsembleSection ensemble;
  NormSection norm;
  VerifySection verify;
  SolveSection solve;
  SweepSection sweep;

  /// Throws ConfigError naming the first invalid entry.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Strict parse: unknown keys and wrong types are errors; missing keys keep their defaults.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
/// Canonical JSON (every key present, sorted); parse_run_config(to_json(c)) == c.
std::string to_json(const RunConfig& config);

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"zero", "single-mode", "taylor_green", "bump", "rough"};
  return names;
}
/// Scalar preset: 0, cos(2 pi x/L), sin sin, Gaussian bump (sigma L/32) at the center,
/// or sample 0 of the rough ensemble for the seed.
ScalarField preset_scalar(const std::string& name, const PeriodicGrid& grid, std::uint64_t seed = 7);
/// Divergence-free preset velocity; bump and rough use the scalar preset as a stream function.
VectorField preset_velocity(const std::string& name, const PeriodicGrid& grid, std::uint64_t seed = 7);
/// 1 + rho_dev sin(2 pi x/L) cos(2 pi y/L).
ScalarField preset_density(const PeriodicGrid& grid, double rho_dev);

}  // namespace tentflow
