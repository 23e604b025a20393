// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tentflow/field.hpp"
#include "tentflow/time_grid.hpp"

namespace tentflow {

enum class EnsembleKind { band_limited_random, localized_bumps, plane_wave_mix, slobodeckij_rough };
std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_kind_from_string(const std::string& name);

/// Seeded family of test fields. Samples are defined in continuum terms, so the
/// same index gives the same function at every resolution with N >= 64.
struct Ensemble {
  std::uint64_t seed = 7;
  EnsembleKind kind = EnsembleKind::band_limited_random;
  int size = 50;
  int components = 1;
  /// Decay offset s of the rough spectrum |m|^{-(n/2 + s)}.
  double roughness = 0.8;

  void validate() const;
  VectorField sample(const PeriodicGrid& grid, int index) const;
};

enum class Verdict { bounded_stable, unstable };
std::string to_string(Verdict verdict);

struct SampleRatio {
  int index = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool skipped = false;
};

struct ResolutionRun {
  int n = 0;
  std::vector<SampleRatio> samples;
  double c_emp = 0.0;
};

struct InequalityReport {
  std::string id;
  std::vector<std::pair<std::string, double>> params;
  std::vector<ResolutionRun> runs;  ///< base N, then 2N
  double c_emp = 0.0;               ///< at the finest resolution
  Verdict verdict = Verdict::unstable;
};

/// Skips ratios whose RHS is zero or below 1e-12 * scale.
SampleRatio make_ratio(int index, double lhs, double rhs, double scale);
double c_emp_of(std::span<const SampleRatio> samples);
/// BOUNDED_STABLE iff |c_fine / c_coarse - 1| < 0.25 (two zero constants count as stable).
Verdict verdict_of(double c_coarse, double c_fine);

/// Geometry of campaigns: runs at n and 2n with the standard ball family.
struct CampaignGrid {
  int dim = 2;
  double L = 1.0;
  int n = 64;
  void validate() const;
};

/// T(t^{1-a}) norm of d_t e^{t Delta} f against ||f||_{U_a}.
InequalityReport check_lemma_timederiv(const Ensemble& ens, double alpha, const CampaignGrid& grid);
/// T(t^b) norm of M+ u against that of u for u = e^{kappa t Delta} F. Requires b < 1.
InequalityReport check_maxreg_bound(const Ensemble& ens, double beta, const CampaignGrid& grid);
/// T(t^b) norm of P u against that of u. Requires b < 2.
InequalityReport check_leray_tent(const Ensemble& ens, double beta, const CampaignGrid& grid);
/// [0]: boldT(t^{-a}) of grad e^{t Delta} f vs ||f||_{U_a}; [1]: T(t^{1-a}) of v.grad v vs
/// sup_t t^{1/2} max|v| * boldT(t^{-a}) of grad v.
std::array<InequalityReport, 2> check_gradient_and_product(const Ensemble& ens, double alpha, const CampaignGrid& grid);
/// Duhamel bounds for f = Delta e^{kappa t Delta} g against T(t^{1-a}) of f: [0] sup t^{1/2}|D f|,
/// [1] boldT(t^{-a}) of grad D f, [2] sup_t of the B^{-1}_{inf,inf} norm of D f(t).
std::array<InequalityReport, 3> check_key_inequalities(const Ensemble& ens, double alpha, const CampaignGrid& grid);
/// ||ab||_{H^1} against ||a||_{B^{-1}} ||b||_{H^2} + ||b||_{B^{-1}} ||a||_{H^2}; needs 2 components.
InequalityReport check_bilinear(const Ensemble& ens, const CampaignGrid& grid);
/// [0]: U_a vs V_a on `rough`; [1]: U_a vs B^{-1+n/2}_{2,inf} on `smooth`.
std::array<InequalityReport, 2> check_embeddings(const Ensemble& rough, const Ensemble& smooth, double alpha,
                                                 const CampaignGrid& grid);
/// max over k = 0..k_max of ||mollify(a, k)||_{U_a} / ||a||_{U_a}.
InequalityReport check_mollification(const Ensemble& ens, double alpha, const CampaignGrid& grid, int k_max = 20);

struct OffDiagonalGeometry {
  Point x0{0.5, 0.5, 0.5};
  double r = 1.0 / 64.0;
};

struct OffDiagonalMeasurement {
  int j = 0;
  double theta = 0.0;
  double x = 0.0;       ///< (2^j r)^2 / theta
  double lhs = 0.0;     ///< int_E |theta Delta e^{theta Delta}(1_F f)|^2
  double f_mass = 0.0;  ///< int_F |f|^2
  double ratio() const { return f_mass > 0.0 ? lhs / f_mass : 0.0; }
};

/// E = B(x0, r), F = B(x0, 2^j r) minus B(x0, 2^{j-1} r); requires 2^j r <= L/4.
OffDiagonalMeasurement measure_offdiagonal(const ScalarField& f, int j, double theta, const OffDiagonalGeometry& geom);

struct OffDiagonalReport {
  double n_exp = 2.0;
  std::vector<OffDiagonalMeasurement> points;  ///< points used in the fit
  double slope = 0.0;        ///< least-squares slope of log ratio vs log x
  double fitted_c = 0.0;     ///< max ratio * (1 + x)^{2 n_exp}
  double bound = 0.0;        ///< -2 n_exp + 0.2
  bool pass = false;
};

/// Sweep theta = (2^j r)^2 4^{-m} (m >= 0, theta >= 4 h^2, ratio above 1e-24) over the given j;
/// the slope is fitted on the points from each j's maximum ratio onward.
OffDiagonalReport check_offdiagonal(const ScalarField& f, double n_exp, const OffDiagonalGeometry& geom,
                                    std::span<const int> js);
/// Single point against the decay factor with the given constant: LHS / (c (1 + x)^{-2 n_exp} int_F |f|^2).
double offdiagonal_ratio(const ScalarField& f, int j, double theta, double n_exp, const OffDiagonalGeometry& geom,
                         double c);

struct ScalingRow {
  double lambda = 1.0;
  double norm = 0.0;         ///< ||f||_{U_a} on the base family
  double scaled_norm = 0.0;  ///< ||f_lambda||_{U_a} on the image family
  double deviation = 0.0;    ///< |lambda scaled_norm - norm| / norm
};

struct ScalingReport {
  double alpha = 0.5;
  std::vector<ScalingRow> rows;
  double max_deviation = 0.0;
};

/// Dilation about the domain center, f_lambda(x) = f(c + lambda (x - c)), for lambda in {1/2, 1, 2}.
/// Base family: centers within L/8 of c, radii L/8, L/16, L/32; the image family maps
/// centers to c + (x0 - c) / lambda and radii to r / lambda.
ScalingReport check_scaling(const ScalarField& f, double alpha, std::span<const double> lambdas);
ScalarField dilate(const ScalarField& f, double lambda);

}  // namespace tentflow
