// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>

#include "tentflow/balls.hpp"
#include "tentflow/field.hpp"
#include "tentflow/time_grid.hpp"

namespace tentflow {

enum class TentFamily { U, T, BoldT, ClassicT, V, BMO };

std::string to_string(TentFamily family);

/// Time weight and normalization of one tent family.
struct TentWeight {
  TentFamily family;
  double alpha_or_beta = 0.0;
  double p = 2.0;

  /// Exponent e in r^{-e}: U -> n-2a-2, T -> n+2b-4, BoldT -> n+2b-2, ClassicT/BMO -> n.
  double radius_exponent(int dim) const;
  /// Exponent of t in the integrand.
  double time_exponent() const;
  void validate() const;
};

struct NormReport {
  std::string family;
  double param = 0.0;
  double value = 0.0;
  std::array<double, 3> argmax_center{0.0, 0.0, 0.0};
  double argmax_radius = 0.0;
  int grid_n = 0;
  int time_nodes = 0;
  std::string balls;
  /// Share of the argmax tent integral contributed by the extrapolated t < t_min part.
  double tail_fraction = 0.0;
  /// V only: estimated share of the excluded diagonal cells at the argmax ball.
  double diagonal_fraction = 0.0;
};

/// Quadrature controls for tents built from a single field.
struct TentQuadrature {
  int cells_per_factor4 = 8;   ///< log cells per factor 4 in t
  double t_min_factor = 1e-2;  ///< t_min <= t_min_factor * h^2
};

/// Log-uniform time grid on [t_min, r_max^2] whose cell boundaries include each
/// dyadic r_j^2 of the family. time_nodes > 0 sets a minimum cell count, rounded up
/// to a whole number of cells per factor 4.
TimeGrid tent_time_grid(const BallFamily& balls, int time_nodes = 0, const TentQuadrature& q = {});

/// sup over balls of (r^{2a+2-n} int_0^{r^2} int_B |grad e^{t Delta} f|^2 t^{-a} dy dt)^{1/2}.
NormReport u_alpha_norm(const VectorField& f, double alpha, const BallFamily& balls, int time_nodes = 0);
NormReport u_alpha_norm(const ScalarField& f, double alpha, const BallFamily& balls, int time_nodes = 0);

/// sup over balls of (r^{-n} int_0^{r^2} int_B |e^{t Delta} f|^2)^{1/2}.
NormReport bmo_minus1_norm(const VectorField& f, const BallFamily& balls, int time_nodes = 0);
NormReport bmo_minus1_norm(const ScalarField& f, const BallFamily& balls, int time_nodes = 0);

NormReport tent_T_norm(const SpaceTimeField& u, double beta, const BallFamily& balls);
NormReport tent_boldT_norm(const SpaceTimeField& u, double beta, const BallFamily& balls);
NormReport classic_tent_norm(const SpaceTimeField& u, double p, const BallFamily& balls);

/// Per-ball tent integrals for a TentWeight, before the sup.
struct TentProfile {
  // values[r][c] = (r^{-e} int int |u|^p t^w)^{1/p}
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> tails;
};
TentProfile tent_profile(const SpaceTimeField& u, const TentWeight& weight, const BallFamily& balls);

/// sup over balls of (r^{2a+2-n} int_B int_B |f(x)-f(y)|^2 / |x-y|^{n+2a})^{1/2}.
NormReport v_alpha_norm(const VectorField& f, double alpha, const BallFamily& balls);
NormReport v_alpha_norm(const ScalarField& f, double alpha, const BallFamily& balls);

enum class BesovFlavor { inf_inf, two_inf };

struct BesovWindow {
  double t_lo = 0.0;       ///< 0 -> 1e-2 h^2
  double t_hi = 0.0;       ///< 0 -> L^2
  int per_octave = 4;
  bool refine = true;      ///< golden-section refinement around the grid maximum
};

struct BesovReport {
  double value = 0.0;
  double t_at_max = 0.0;
  bool at_endpoint = false;
};

/// sup_t t^{-s/2} ||e^{t Delta} f||_{L^q}, q = inf (inf_inf, s = -1) or 2 (two_inf, s = -1 + n/2).
/// The zero mode is ignored.
BesovReport besov_heatflow_norm(const VectorField& f, double s, BesovFlavor flavor, const BesovWindow& window = {});
BesovReport besov_heatflow_norm(const ScalarField& f, double s, BesovFlavor flavor, const BesovWindow& window = {});

/// (sum_{k != 0} |k|^{2s} |f_k|^2)^{1/2} with the discrete Parseval normalization.
double sobolev_norm(const VectorField& f, double s);
double sobolev_norm(const ScalarField& f, double s);

struct EAlphaReport {
  double dt_norm = 0.0;
  double lap_norm = 0.0;
  double grad_norm = 0.0;
  double sqrt_t_sup = 0.0;
  double besov_sup = 0.0;
  double total = 0.0;
  /// Richardson estimate of the relative error of the finite-difference time derivative.
  double dt_rel_error = 0.0;
  bool dt_underresolved = false;
};

EAlphaReport e_alpha_norm(const SpaceTimeField& u, double alpha, const BallFamily& balls);

}  // namespace tentflow
