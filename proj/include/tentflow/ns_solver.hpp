// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tentflow/balls.hpp"
#include "tentflow/field.hpp"
#include "tentflow/tent_norms.hpp"
#include "tentflow/time_grid.hpp"

namespace tentflow {

struct SolverConfig {
  int dim = 2;
  double L = 1.0;
  int N = 64;
  double alpha = 0.5;
  /// Smallness target for ||u0||_{U_alpha} + ||rho0 - 1||_inf.
  double eps0 = 0.5;
  double t_final = 0.1;
  int time_nodes = 256;
  int picard_max = 40;
  double picard_tol = 1e-6;
  double dealias_fraction = 2.0 / 3.0;
  int mollify_k = 20;
  /// First time node is t_min_factor * h^2.
  double t_min_factor = 1e-2;

  void validate() const;
  PeriodicGrid grid() const;
  TimeGrid time_grid() const;
  /// Standard centers; dyadic radii with r^2 <= t_final (four radii).
  BallFamily balls() const;

  bool operator==(const SolverConfig&) const = default;
};

/// Non-finite values appeared in a Picard iterate.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DiagnosticsRow {
  int iter = 0;
  EAlphaReport e_alpha;
  std::vector<double> rho_dev;     ///< max|rho - 1| per node
  std::vector<double> energy_lhs;  ///< 0.5 ||u(t)||^2 + int_0^t ||grad u||^2 per node
  double energy_rhs = 0.0;         ///< 0.5 ||u0||^2
  std::vector<double> div_max;     ///< max|div u| per node
  double increment = 0.0;          ///< relative space-time L^2 change of the iterate
  double e_alpha_change = 0.0;     ///< relative change of the E_alpha total
};

struct SolverState {
  ScalarField rho_initial;  ///< density at t = 0
  ScalarField rho;  ///< density at the last node
  ScalarField a;    ///< rho - 1 at the last node
  SpaceTimeField rho_traj;
  SpaceTimeField u_traj;
  SpaceTimeField dt_u_traj;
  int iterate_index = 0;
  std::vector<DiagnosticsRow> diagnostics;
};

struct DuhamelSplit {
  SpaceTimeField u_L;
  SpaceTimeField v;
  SpaceTimeField w;
};

struct PreparedData {
  VectorField u0;
  ScalarField rho0;
  double raw_norm = 0.0;        ///< ||u0_raw||_{U_alpha}
  double mollified_norm = 0.0;  ///< ||P mollify(u0_raw)||_{U_alpha} before rescaling
  double c_moll = 0.0;          ///< mollified_norm / raw_norm (0 if raw_norm == 0)
  double rescale_factor = 1.0;
  double u0_norm = 0.0;         ///< ||u0||_{U_alpha} after rescaling
  double rho_dev = 0.0;         ///< ||rho0 - 1||_inf
};

PreparedData prepare_data(const VectorField& u0_raw, const ScalarField& rho0, const SolverConfig& cfg);

/// Semi-Lagrangian transport of rho along the trajectory from t_from to t_to.
ScalarField transport_density(const ScalarField& rho, const SpaceTimeField& u_traj, double t_from, double t_to);

/// Initial iterate: u = e^{t Delta} u0 with density transported along it.
SolverState initial_state(const VectorField& u0, const ScalarField& rho0, const SolverConfig& cfg);

std::pair<SolverState, DuhamelSplit> picard_step(const SolverState& state, const VectorField& u0,
                                                 const SolverConfig& cfg);

enum class SolveStatus { converged, max_iters, diverged };
std::string to_string(SolveStatus status);

struct SolveResult {
  SolverState state;
  EAlphaReport e_alpha;
  SolveStatus status = SolveStatus::max_iters;
  PreparedData data;
  std::string message;
};

SolveResult solve(const VectorField& u0_raw, const ScalarField& rho0, const SolverConfig& cfg);

/// Constant-density pseudo-spectral solver (integrating factor, low-storage RK4)
/// sampled on cfg.time_grid().
SpaceTimeField reference_solve(const VectorField& u0, const SolverConfig& cfg);

struct EnergyReport {
  double max_excess = 0.0;  ///< max_t (LHS - RHS) / RHS
  bool pass = true;
  std::vector<double> lhs;
  double rhs = 0.0;
};

/// Energy inequality check; without u0 the datum is reconstructed from the first node.
EnergyReport energy_check(const SpaceTimeField& traj);
EnergyReport energy_check(const SpaceTimeField& traj, const VectorField& u0);

}  // namespace tentflow
