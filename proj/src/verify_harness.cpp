// SPDX-License-Identifier: Apache-2.0
#include "tentflow/verify_harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tentflow/balls.hpp"
#include "tentflow/heat_ops.hpp"
#include "tentflow/parallel.hpp"
#include "tentflow/tent_norms.hpp"

namespace tentflow {

std::string to_string(Verdict verdict) { return verdict == Verdict::bounded_stable ? "BOUNDED_STABLE" : "UNSTABLE"; }

SampleRatio make_ratio(int index, double lhs, double rhs, double scale) {
  SampleRatio s{index, lhs, rhs, false};
  s.skipped = !(rhs > 0.0) || rhs < 1e-12 * scale;
  return s;
}

double c_emp_of(std::span<const SampleRatio> samples) {
  double c = 0.0;
  for (const auto& s : samples)
    if (!s.skipped) c = std::max(c, s.lhs / s.rhs);
  return c;
}

Verdict verdict_of(double c_coarse, double c_fine) {
  if (c_coarse == 0.0 && c_fine == 0.0) return Verdict::bounded_stable;
  if (!(c_coarse > 0.0)) return Verdict::unstable;
  return std::abs(c_fine / c_coarse - 1.0) < 0.25 ? Verdict::bounded_stable : Verdict::unstable;
}

void CampaignGrid::validate() const {
  if (dim != 2 && dim != 3) throw std::invalid_argument("campaign grid: dim must be 2 or 3");
  if (!(L > 0.0)) throw std::invalid_argument("campaign grid: L must be positive");
  if (n < 64 || (n & (n - 1)) != 0) throw std::invalid_argument("campaign grid: n must be a power of two >= 64");
}

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("campaign: alpha must lie in (0, 1)");
}

struct Context {
  PeriodicGrid grid;
  BallFamily balls;
  TimeGrid tg;
};

Context make_context(const CampaignGrid& cg, int n) {
  PeriodicGrid g(cg.dim, cg.L, n);
  BallFamily balls = BallFamily::standard(g);
  TimeGrid tg = tent_time_grid(balls);
  return Context{g, std::move(balls), std::move(tg)};
}

double kappa_of(int index) {
  static constexpr double kappas[3] = {0.0, 0.5, 2.0};
  return kappas[index % 3];
}

// e^{kappa t Delta} F at every node; with `laplace` the Laplacian of it.
SpaceTimeField heat_flow(const VectorField& f, const TimeGrid& tg, double kappa, bool laplace = false) {
  const auto f_hat = to_spectral(f);
  std::vector<VectorField> slices;
  slices.reserve(tg.size());
  for (double t : tg.nodes()) {
    std::vector<Spectrum> s = f_hat;
    for (auto& c : s)
      for_each_mode(c.grid(), [&](const Mode& m) { c[m.index] *= std::exp(-kappa * t * m.k2) * (laplace ? -m.k2 : 1.0); });
    slices.push_back(to_physical(s));
  }
  return SpaceTimeField(tg, std::move(slices));
}

template <class F>
SpaceTimeField map_slices(const SpaceTimeField& u, F&& fn) {
  std::vector<VectorField> out;
  out.reserve(u.size());
  for (const auto& s : u.slices()) out.push_back(fn(s));
  return SpaceTimeField(u.time_grid(), std::move(out));
}

template <std::size_t K>
using Row = std::array<SampleRatio, K>;

template <std::size_t K, class Measure>
std::array<InequalityReport, K> run_refined(const std::array<std::string, K>& ids,
                                            const std::vector<std::pair<std::string, double>>& params,
                                            const Ensemble& ens, const CampaignGrid& cg, Measure&& measure) {
  cg.validate();
  ens.validate();
  std::array<InequalityReport, K> reports;
  for (std::size_t k = 0; k < K; ++k) {
    reports[k].id = ids[k];
    reports[k].params = params;
  }
  for (int n : {cg.n, 2 * cg.n}) {
    const Context ctx = make_context(cg, n);
    std::vector<Row<K>> rows(static_cast<std::size_t>(ens.size));
    parallel_for(rows.size(), [&](std::size_t i) {
      const int idx = static_cast<int>(i);
      rows[i] = measure(ctx, ens.sample(ctx.grid, idx), idx);
    });
    for (std::size_t k = 0; k < K; ++k) {
      ResolutionRun run;
      run.n = n;
      for (const auto& r : rows) run.samples.push_back(r[k]);
      run.c_emp = c_emp_of(run.samples);
      reports[k].runs.push_back(std::move(run));
    }
  }
  for (auto& r : reports) {
    r.c_emp = r.runs.back().c_emp;
    r.verdict = verdict_of(r.runs.front().c_emp, r.runs.back().c_emp);
  }
  return reports;
}

double sup_sqrt_t_max(const SpaceTimeField& u) {
  double s = 0.0;
  for (std::size_t m = 0; m < u.size(); ++m) s = std::max(s, std::sqrt(u.time_grid().node(m)) * u[m].max_abs());
  return s;
}

}  // namespace

InequalityReport check_lemma_timederiv(const Ensemble& ens, double alpha, const CampaignGrid& grid) {
  require_alpha(alpha);
  return run_refined<1>({"lemma_timederiv"}, {{"alpha", alpha}}, ens, grid,
                        [&](const Context& ctx, const VectorField& f, int idx) {
                          const SpaceTimeField dt_u = heat_flow(f, ctx.tg, 1.0, true);
                          const double lhs = tent_T_norm(dt_u, 1.0 - alpha, ctx.balls).value;
                          const double rhs = u_alpha_norm(f, alpha, ctx.balls).value;
                          return Row<1>{make_ratio(idx, lhs, rhs, f.max_abs())};
                        })[0];
}

InequalityReport check_maxreg_bound(const Ensemble& ens, double beta, const CampaignGrid& grid) {
  if (!(beta < 1.0)) throw std::invalid_argument("check_maxreg_bound: M+ is bounded on T(t^beta) only for beta < 1");
  if (!(beta > -1.0)) throw std::invalid_argument("check_maxreg_bound: beta must exceed -1");
  return run_refined<1>({"maxreg_bound"}, {{"beta", beta}}, ens, grid,
                        [&](const Context& ctx, const VectorField& f, int idx) {
                          const SpaceTimeField u = heat_flow(f, ctx.tg, kappa_of(idx));
                          const double lhs = tent_T_norm(maximal_regularity(u), beta, ctx.balls).value;
                          const double rhs = tent_T_norm(u, beta, ctx.balls).value;
                          return Row<1>{make_ratio(idx, lhs, rhs, f.max_abs())};
                        })[0];
}

InequalityReport check_leray_tent(const Ensemble& ens, double beta, const CampaignGrid& grid) {
  if (!(beta < 2.0)) throw std::invalid_argument("check_leray_tent: P is bounded on T(t^beta) only for beta < 2");
  if (!(beta > -1.0)) throw std::invalid_argument("check_leray_tent: beta must exceed -1");
  if (ens.components != grid.dim) throw std::invalid_argument("check_leray_tent: ensemble needs dim components");
  return run_refined<1>({"leray_tent"}, {{"beta", beta}}, ens, grid,
                        [&](const Context& ctx, const VectorField& f, int idx) {
                          const SpaceTimeField u = heat_flow(f, ctx.tg, kappa_of(idx));
                          const SpaceTimeField pu = map_slices(u, [](const VectorField& s) { return leray_project(s); });
                          const double lhs = tent_T_norm(pu, beta, ctx.balls).value;
                          const double rhs = tent_T_norm(u, beta, ctx.balls).value;
                          return Row<1>{make_ratio(idx, lhs, rhs, f.max_abs())};
                        })[0];
}

std::array<InequalityReport, 2> check_gradient_and_product(const Ensemble& ens, double alpha, const CampaignGrid& grid) {
  require_alpha(alpha);
  if (ens.components != grid.dim) throw std::invalid_argument("check_gradient_and_product: ensemble needs dim components");
  return run_refined<2>({"gradient_identity", "product_bound"}, {{"alpha", alpha}}, ens, grid,
                        [&](const Context& ctx, const VectorField& f, int idx) {
                          const SpaceTimeField v = heat_flow(f, ctx.tg, 1.0);
                          const SpaceTimeField grad = map_slices(v, [](const VectorField& s) { return gradient(s); });
                          const double grad_norm = tent_boldT_norm(grad, -alpha, ctx.balls).value;
                          const double u_norm = u_alpha_norm(f, alpha, ctx.balls).value;
                          const int d = ctx.grid.dim();
                          const SpaceTimeField vgv = map_slices(v, [&](const VectorField& s) {
                            const VectorField g = gradient(s);
                            std::vector<ScalarField> out;
                            for (int c = 0; c < d; ++c) {
                              ScalarField acc = ScalarField::zeros(ctx.grid);
                              for (int j = 0; j < d; ++j) acc = acc + pointwise_product(s[j], g[c * d + j]);
                              out.push_back(acc);
                            }
                            return VectorField(std::move(out));
                          });
                          const double lhs = tent_T_norm(vgv, 1.0 - alpha, ctx.balls).value;
                          const double rhs = sup_sqrt_t_max(v) * grad_norm;
                          return Row<2>{make_ratio(idx, grad_norm, u_norm, f.max_abs()),
                                        make_ratio(idx, lhs, rhs, f.max_abs() * f.max_abs())};
                        });
}

std::array<InequalityReport, 3> check_key_inequalities(const Ensemble& ens, double alpha, const CampaignGrid& grid) {
  require_alpha(alpha);
  return run_refined<3>({"key_sup", "key_gradient", "key_besov"}, {{"alpha", alpha}}, ens, grid,
                        [&](const Context& ctx, const VectorField& g, int idx) {
                          const SpaceTimeField f = heat_flow(g, ctx.tg, kappa_of(idx), true);
                          const double rhs = tent_T_norm(f, 1.0 - alpha, ctx.balls).value;
                          const SpaceTimeField d = duhamel(f);
                          const double lhs1 = sup_sqrt_t_max(d);
                          const double lhs2 = tent_boldT_norm(duhamel(f, DuhamelDerivative::gradient), -alpha, ctx.balls).value;
                          // Besov sup over at most 24 nodes, 2 points per octave, no refinement.
                          BesovWindow w;
                          w.per_octave = 2;
                          w.refine = false;
                          const std::size_t stride = std::max<std::size_t>(1, (d.size() + 23) / 24);
                          double lhs3 = 0.0;
                          for (std::size_t m = d.size(); m-- > 0;)
                            if ((d.size() - 1 - m) % stride == 0)
                              lhs3 = std::max(lhs3, besov_heatflow_norm(d[m], -1.0, BesovFlavor::inf_inf, w).value);
                          const double scale = g.max_abs();
                          return Row<3>{make_ratio(idx, lhs1, rhs, scale), make_ratio(idx, lhs2, rhs, scale),
                                        make_ratio(idx, lhs3, rhs, scale)};
                        });
}

InequalityReport check_bilinear(const Ensemble& ens, const CampaignGrid& grid) {
  if (ens.components < 2) throw std::invalid_argument("check_bilinear: ensemble needs two components per sample");
  return run_refined<1>({"bilinear"}, {}, ens, grid, [&](const Context&, const VectorField& f, int idx) {
    const ScalarField& a = f[0];
    const ScalarField& b = f[1];
    const ScalarField ab = dealiased_product(a, b, 2.0 / 3.0);
    const double lhs = sobolev_norm(ab, 1.0);
    const double ba = besov_heatflow_norm(a, -1.0, BesovFlavor::inf_inf).value;
    const double bb = besov_heatflow_norm(b, -1.0, BesovFlavor::inf_inf).value;
    const double rhs = ba * sobolev_norm(b, 2.0) + bb * sobolev_norm(a, 2.0);
    return Row<1>{make_ratio(idx, lhs, rhs, a.max_abs() * b.max_abs())};
  })[0];
}

std::array<InequalityReport, 2> check_embeddings(const Ensemble& rough, const Ensemble& smooth, double alpha,
                                                 const CampaignGrid& grid) {
  require_alpha(alpha);
  const std::vector<std::pair<std::string, double>> params{{"alpha", alpha}};
  InequalityReport v = run_refined<1>({"embedding_v_u"}, params, rough, grid,
                                      [&](const Context& ctx, const VectorField& f, int idx) {
                                        const double lhs = u_alpha_norm(f, alpha, ctx.balls).value;
                                        const double rhs = v_alpha_norm(f, alpha, ctx.balls).value;
                                        return Row<1>{make_ratio(idx, lhs, rhs, f.max_abs())};
                                      })[0];
  InequalityReport b = run_refined<1>({"embedding_besov_u"}, params, smooth, grid,
                                      [&](const Context& ctx, const VectorField& f, int idx) {
                                        const double s = -1.0 + 0.5 * ctx.grid.dim();
                                        const double lhs = u_alpha_norm(f, alpha, ctx.balls).value;
                                        const double rhs = besov_heatflow_norm(f, s, BesovFlavor::two_inf).value;
                                        return Row<1>{make_ratio(idx, lhs, rhs, f.max_abs())};
                                      })[0];
  return {std::move(v), std::move(b)};
}

InequalityReport check_mollification(const Ensemble& ens, double alpha, const CampaignGrid& grid, int k_max) {
  require_alpha(alpha);
  if (k_max < 0) throw std::invalid_argument("check_mollification: k_max must be >= 0");
  return run_refined<1>({"mollification"}, {{"alpha", alpha}, {"k_max", static_cast<double>(k_max)}}, ens, grid,
                        [&](const Context& ctx, const VectorField& f, int idx) {
                          double lhs = 0.0;
                          for (int k = 0; k <= k_max; ++k)
                            lhs = std::max(lhs, u_alpha_norm(mollify(f, k), alpha, ctx.balls).value);
                          const double rhs = u_alpha_norm(f, alpha, ctx.balls).value;
                          return Row<1>{make_ratio(idx, lhs, rhs, f.max_abs())};
                        })[0];
}

namespace {

double min_image_distance(const PeriodicGrid& g, const Point& x, const Point& y) {
  const double L = g.side_length();
  double r2 = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    double d = x[a] - y[a];
    d -= L * std::round(d / L);
    r2 += d * d;
  }
  return std::sqrt(r2);
}

}  // namespace

OffDiagonalMeasurement measure_offdiagonal(const ScalarField& f, int j, double theta, const OffDiagonalGeometry& geom) {
  const PeriodicGrid& g = f.grid();
  if (j < 1) throw std::invalid_argument("offdiagonal: j must be >= 1");
  if (!(theta > 0.0)) throw std::invalid_argument("offdiagonal: theta must be positive");
  if (!(geom.r > 0.0)) throw std::invalid_argument("offdiagonal: r must be positive");
  const double outer = std::ldexp(geom.r, j);
  if (outer > g.side_length() / 4.0 * (1.0 + 1e-12))
    throw std::invalid_argument("offdiagonal: 2^j r exceeds L/4 (annulus would wrap)");
  const double inner = 0.5 * outer;
  const double h = g.spacing();
  std::vector<double> masked(g.point_count(), 0.0);
  std::vector<char> in_e(g.point_count(), 0);
  double f_mass = 0.0;
  for (std::size_t i = 0; i < masked.size(); ++i) {
    const auto idx = g.unflatten(i);
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a) x[a] = idx[a] * h;
    const double d = min_image_distance(g, x, geom.x0);
    if (d >= inner && d < outer) {
      masked[i] = f[i];
      f_mass += f[i] * f[i];
    }
    in_e[i] = d < geom.r;
  }
  const MultiplierOp op{[theta](const Mode& m) { return Complex(-theta * m.k2 * std::exp(-theta * m.k2), 0.0); },
                        "theta Delta e^{theta Delta}"};
  const ScalarField out = op.apply(ScalarField(g, std::move(masked)));
  double lhs = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (in_e[i]) lhs += out[i] * out[i];
  OffDiagonalMeasurement m;
  m.j = j;
  m.theta = theta;
  m.x = outer * outer / theta;
  m.lhs = lhs * g.cell_volume();
  m.f_mass = f_mass * g.cell_volume();
  return m;
}

double offdiagonal_ratio(const ScalarField& f, int j, double theta, double n_exp, const OffDiagonalGeometry& geom,
                         double c) {
  if (!(c > 0.0)) throw std::invalid_argument("offdiagonal_ratio: constant must be positive");
  const OffDiagonalMeasurement m = measure_offdiagonal(f, j, theta, geom);
  if (m.f_mass == 0.0) return 0.0;
  return m.lhs / (c * std::pow(1.0 + m.x, -2.0 * n_exp) * m.f_mass);
}

OffDiagonalReport check_offdiagonal(const ScalarField& f, double n_exp, const OffDiagonalGeometry& geom,
                                    std::span<const int> js) {
  if (!(n_exp > 0.0)) throw std::invalid_argument("check_offdiagonal: n_exp must be positive");
  const double h = f.grid().spacing();
  OffDiagonalReport rep;
  rep.n_exp = n_exp;
  rep.bound = -2.0 * n_exp + 0.2;
  for (int j : js) {
    const double outer = std::ldexp(geom.r, j);
    std::vector<OffDiagonalMeasurement> sweep;
    for (int m = 0;; ++m) {
      const double theta = outer * outer * std::pow(4.0, -m);
      if (theta < 4.0 * h * h) break;
      const OffDiagonalMeasurement meas = measure_offdiagonal(f, j, theta, geom);
      if (!(meas.ratio() > 1e-24)) break;
      sweep.push_back(meas);
    }
    // The ratio first rises while e^{theta Delta} still spreads mass onto E; the decay
    // rate is fitted from the per-j maximum onward.
    const auto peak = std::max_element(sweep.begin(), sweep.end(),
                                       [](const auto& a, const auto& b) { return a.ratio() < b.ratio(); });
    rep.points.insert(rep.points.end(), peak, sweep.end());
  }
  if (rep.points.size() < 2) throw std::runtime_error("check_offdiagonal: fewer than two usable sweep points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& p : rep.points) {
    const double x = std::log(p.x), y = std::log(p.ratio());
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    rep.fitted_c = std::max(rep.fitted_c, p.ratio() * std::pow(1.0 + p.x, 2.0 * n_exp));
  }
  const double n = static_cast<double>(rep.points.size());
  rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.pass = rep.slope <= rep.bound;
  return rep;
}

ScalarField dilate(const ScalarField& f, double lambda) {
  const PeriodicGrid& g = f.grid();
  const long n = g.points_per_axis();
  if (lambda == 1.0) return f;
  std::vector<double> out(g.point_count());
  if (lambda == 2.0) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto idx = g.unflatten(i);
      std::array<long, 3> src{0, 0, 0};
      for (int a = 0; a < g.dim(); ++a) src[a] = 2 * idx[a] - n / 2;
      out[i] = f[g.flatten(src)];
    }
  } else if (lambda == 0.5) {
    const PeriodicGrid fine(g.dim(), g.side_length(), static_cast<int>(2 * n));
    const ScalarField ff = resample(f, fine);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto idx = g.unflatten(i);
      std::array<long, 3> src{0, 0, 0};
      for (int a = 0; a < g.dim(); ++a) src[a] = idx[a] + n / 2;
      out[i] = ff[fine.flatten(src)];
    }
  } else {
    throw std::invalid_argument("dilate: lambda must be 1/2, 1 or 2 (grid-compatible dyadic scaling)");
  }
  return ScalarField(g, std::move(out));
}

ScalingReport check_scaling(const ScalarField& f, double alpha, std::span<const double> lambdas) {
  require_alpha(alpha);
  const PeriodicGrid& g = f.grid();
  const int n = g.points_per_axis();
  const int dim = g.dim();
  const double L = g.side_length();
  for (double l : lambdas)
    if (l != 0.5 && l != 1.0 && l != 2.0) throw std::invalid_argument("check_scaling: lambda must be 1/2, 1 or 2");

  // Base centers within L/8 of the domain center, radii L/8, L/16, L/32.
  std::vector<std::array<int, 3>> base;
  const int step = n / 8;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c) {
        if (dim == 2 && c != 0) continue;
        base.push_back({n / 2 + a * step, n / 2 + b * step, dim == 3 ? n / 2 + c * step : 0});
      }
  const std::vector<double> radii{L / 8.0, L / 16.0, L / 32.0};
  const double norm = u_alpha_norm(f, alpha, BallFamily(g, base, radii)).value;

  ScalingReport rep;
  rep.alpha = alpha;
  for (double l : lambdas) {
    ScalingRow row;
    row.lambda = l;
    row.norm = norm;
    if (l == 1.0) {
      row.scaled_norm = norm;
    } else {
      std::vector<std::array<int, 3>> centers;
      for (const auto& c : base) {
        std::array<int, 3> m{0, 0, 0};
        for (int a = 0; a < dim; ++a) m[a] = n / 2 + static_cast<int>(std::lround((c[a] - n / 2) / l));
        centers.push_back(m);
      }
      std::vector<double> r2;
      for (double r : radii) r2.push_back(r / l);
      row.scaled_norm = u_alpha_norm(dilate(f, l), alpha, BallFamily(g, centers, r2)).value;
    }
    row.deviation = norm > 0.0 ? std::abs(l * row.scaled_norm - norm) / norm : 0.0;
    rep.max_deviation = std::max(rep.max_deviation, row.deviation);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace tentflow
