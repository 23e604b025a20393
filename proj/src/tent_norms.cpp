// SPDX-License-Identifier: Apache-2.0
#include "tentflow/tent_norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tent_internal.hpp"
#include "tentflow/heat_ops.hpp"

namespace tentflow {

std::string to_string(TentFamily family) {
  switch (family) {
    case TentFamily::U: return "U";
    case TentFamily::T: return "T";
    case TentFamily::BoldT: return "BoldT";
    case TentFamily::ClassicT: return "ClassicT";
    case TentFamily::V: return "V";
    case TentFamily::BMO: return "BMO-1";
  }
  return "?";
}

double TentWeight::radius_exponent(int dim) const {
  switch (family) {
    case TentFamily::U:
    case TentFamily::V: return dim - 2.0 * alpha_or_beta - 2.0;
    case TentFamily::T: return dim + 2.0 * alpha_or_beta - 4.0;
    case TentFamily::BoldT: return dim + 2.0 * alpha_or_beta - 2.0;
    case TentFamily::ClassicT:
    case TentFamily::BMO: return dim;
  }
  return 0.0;
}

double TentWeight::time_exponent() const {
  switch (family) {
    case TentFamily::U: return -alpha_or_beta;
    case TentFamily::T:
    case TentFamily::BoldT: return alpha_or_beta;
    default: return 0.0;
  }
}

void TentWeight::validate() const {
  if (!std::isfinite(alpha_or_beta)) throw std::invalid_argument("TentWeight: parameter must be finite");
  if (family == TentFamily::U && !(alpha_or_beta > -1.0 && alpha_or_beta <= 1.0))
    throw std::invalid_argument("TentWeight: U requires alpha in (-1, 1] (alpha = -1 is the BMO^-1 family)");
  if (family == TentFamily::V && !(alpha_or_beta > 0.0 && alpha_or_beta < 1.0))
    throw std::invalid_argument("TentWeight: V requires alpha in (0, 1)");
  if (family == TentFamily::ClassicT && !(p >= 1.0)) throw std::invalid_argument("TentWeight: ClassicT requires p >= 1");
}

namespace detail {

void check_coverage(const BallFamily& balls, const TimeGrid& tg) {
  const double rmax2 = balls.radii().front() * balls.radii().front();
  const double rmin2 = balls.radii().back() * balls.radii().back();
  if (tg.upper_edge() < rmax2 * (1.0 - 1e-12))
    throw std::invalid_argument("tent norm: time grid ends before r^2 of the largest ball");
  if (!(tg.lower_edge() < rmin2)) throw std::invalid_argument("tent norm: time grid starts after r^2 of the smallest ball");
}

TentAccumulator::TentAccumulator(const BallFamily& balls, const TimeGrid& tg, double time_exp, double radius_exp,
                                 double p)
    : balls_(balls), tg_(tg), time_exp_(time_exp), radius_exp_(radius_exp), p_(p) {
  check_coverage(balls, tg);
  integral_.assign(balls.radius_count(), std::vector<double>(balls.center_count(), 0.0));
  tail_ = integral_;
}

bool TentAccumulator::needed(std::size_t m) const noexcept {
  const double r = balls_.radii().front();
  return tg_.edges()[m] < r * r;
}

void TentAccumulator::add(std::size_t m, std::span<const double> density) {
  const double tw = std::pow(tg_.node(m), time_exp_);
  for (std::size_t r = 0; r < balls_.radius_count(); ++r) {
    const double r2 = balls_.radii()[r] * balls_.radii()[r];
    const double w = tg_.clipped_weight(m, r2) * tw;
    const bool tail = m == 0 && time_exp_ > -1.0;
    if (w == 0.0 && !tail) continue;
    for (std::size_t c = 0; c < balls_.center_count(); ++c) {
      const double s = balls_.ball_sum(r, c, density);
      integral_[r][c] += w * s;
      // Below the first cell the integrand is frozen at its first-node value.
      if (tail) tail_[r][c] = s * std::pow(tg_.lower_edge(), time_exp_ + 1.0) / (time_exp_ + 1.0);
    }
  }
}

TentProfile TentAccumulator::profile() const {
  TentProfile out{integral_, tail_};
  for (std::size_t r = 0; r < balls_.radius_count(); ++r) {
    const double scale = std::pow(balls_.radii()[r], -radius_exp_);
    for (std::size_t c = 0; c < balls_.center_count(); ++c) {
      const double total = std::max(0.0, (integral_[r][c] + tail_[r][c]) * scale);
      out.values[r][c] = std::pow(total, 1.0 / p_);
      out.tails[r][c] = tail_[r][c] * scale;
    }
  }
  return out;
}

NormReport TentAccumulator::report(const std::string& family, double param) const {
  const TentProfile prof = profile();
  NormReport rep;
  rep.family = family;
  rep.param = param;
  rep.grid_n = balls_.grid().points_per_axis();
  rep.time_nodes = static_cast<int>(tg_.size());
  rep.balls = balls_.summary();
  std::size_t br = 0, bc = 0;
  double best = -1.0;
  for (std::size_t r = 0; r < balls_.radius_count(); ++r)
    for (std::size_t c = 0; c < balls_.center_count(); ++c)
      if (prof.values[r][c] > best) {
        best = prof.values[r][c];
        br = r;
        bc = c;
      }
  rep.value = best;
  rep.argmax_center = balls_.center_point(bc);
  rep.argmax_radius = balls_.radii()[br];
  const double total = integral_[br][bc] + tail_[br][bc];
  rep.tail_fraction = total > 0.0 ? tail_[br][bc] / total : 0.0;
  return rep;
}

}  // namespace detail

namespace {

constexpr Complex kI{0.0, 1.0};

void add_square(std::vector<double>& acc, const ScalarField& f) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += f[i] * f[i];
}

std::vector<double> squared_magnitude(const VectorField& u) {
  std::vector<double> d(u.grid().point_count(), 0.0);
  for (const auto& c : u.components()) add_square(d, c);
  return d;
}

// Tent norm over a field's heat extension; grad selects |grad e^{t Delta} f|^2
// over |e^{t Delta} f|^2.
NormReport heat_extension_norm(const VectorField& f, bool grad, double time_exp, double radius_exp,
                               const BallFamily& balls, int time_nodes, const std::string& family, double param) {
  if (!(f.grid() == balls.grid())) throw std::invalid_argument("tent norm: field and ball family grids differ");
  const TimeGrid tg = tent_time_grid(balls, time_nodes);
  detail::TentAccumulator acc(balls, tg, time_exp, radius_exp, 2.0);
  const PeriodicGrid& g = f.grid();
  const auto spectra = to_spectral(f);
  std::vector<double> k2(g.mode_count());
  std::vector<std::array<double, 3>> kd(g.mode_count());
  for_each_mode(g, [&](const Mode& m) {
    k2[m.index] = m.k2;
    kd[m.index] = m.kd;
  });
  std::vector<double> density(g.point_count());
  for (std::size_t m = 0; m < tg.size(); ++m) {
    if (!acc.needed(m)) continue;
    const double t = tg.node(m);
    std::fill(density.begin(), density.end(), 0.0);
    for (const auto& fc : spectra) {
      Spectrum heated = fc;
      for (std::size_t i = 0; i < k2.size(); ++i) heated[i] *= std::exp(-t * k2[i]);
      if (!grad) {
        add_square(density, to_physical(heated));
        continue;
      }
      for (int j = 0; j < g.dim(); ++j) {
        Spectrum d = heated;
        for (std::size_t i = 0; i < k2.size(); ++i) d[i] *= kI * kd[i][j];
        add_square(density, to_physical(d));
      }
    }
    acc.add(m, density);
  }
  return acc.report(family, param);
}

NormReport space_time_norm(const SpaceTimeField& u, const TentWeight& w, const BallFamily& balls) {
  w.validate();
  if (!(u.grid() == balls.grid())) throw std::invalid_argument("tent norm: field and ball family grids differ");
  const double p = w.family == TentFamily::ClassicT ? w.p : 2.0;
  detail::TentAccumulator acc(balls, u.time_grid(), w.time_exponent(), w.radius_exponent(u.grid().dim()), p);
  for (std::size_t m = 0; m < u.size(); ++m) {
    if (!acc.needed(m)) continue;
    std::vector<double> d = squared_magnitude(u[m]);
    if (p != 2.0)
      for (double& x : d) x = std::pow(x, 0.5 * p);
    acc.add(m, d);
  }
  return acc.report(to_string(w.family), w.family == TentFamily::ClassicT ? w.p : w.alpha_or_beta);
}

}  // namespace

TimeGrid tent_time_grid(const BallFamily& balls, int time_nodes, const TentQuadrature& q) {
  const double h = balls.grid().spacing();
  const double t_max = balls.radii().front() * balls.radii().front();
  const double target = q.t_min_factor * h * h;
  const int factors = std::max(1, static_cast<int>(std::ceil(std::log(t_max / target) / std::log(4.0) - 1e-9)));
  int per = q.cells_per_factor4;
  if (time_nodes > 0) per = std::max(1, (time_nodes + factors - 1) / factors);
  const double t_min = t_max * std::pow(4.0, -factors);
  return make_log_time_grid(t_min, t_max, factors * per);
}

NormReport u_alpha_norm(const VectorField& f, double alpha, const BallFamily& balls, int time_nodes) {
  TentWeight w{TentFamily::U, alpha};
  w.validate();
  return heat_extension_norm(f, true, w.time_exponent(), w.radius_exponent(f.grid().dim()), balls, time_nodes, "U",
                             alpha);
}

NormReport u_alpha_norm(const ScalarField& f, double alpha, const BallFamily& balls, int time_nodes) {
  return u_alpha_norm(as_vector(f), alpha, balls, time_nodes);
}

NormReport bmo_minus1_norm(const VectorField& f, const BallFamily& balls, int time_nodes) {
  return heat_extension_norm(f, false, 0.0, f.grid().dim(), balls, time_nodes, "BMO-1", -1.0);
}

NormReport bmo_minus1_norm(const ScalarField& f, const BallFamily& balls, int time_nodes) {
  return bmo_minus1_norm(as_vector(f), balls, time_nodes);
}

NormReport tent_T_norm(const SpaceTimeField& u, double beta, const BallFamily& balls) {
  return space_time_norm(u, {TentFamily::T, beta}, balls);
}

NormReport tent_boldT_norm(const SpaceTimeField& u, double beta, const BallFamily& balls) {
  return space_time_norm(u, {TentFamily::BoldT, beta}, balls);
}

NormReport classic_tent_norm(const SpaceTimeField& u, double p, const BallFamily& balls) {
  if (!(p >= 1.0)) throw std::invalid_argument("classic_tent_norm: p must be >= 1");
  return space_time_norm(u, {TentFamily::ClassicT, 0.0, p}, balls);
}

TentProfile tent_profile(const SpaceTimeField& u, const TentWeight& weight, const BallFamily& balls) {
  weight.validate();
  const double p = weight.family == TentFamily::ClassicT ? weight.p : 2.0;
  detail::TentAccumulator acc(balls, u.time_grid(), weight.time_exponent(), weight.radius_exponent(u.grid().dim()), p);
  for (std::size_t m = 0; m < u.size(); ++m) {
    if (!acc.needed(m)) continue;
    std::vector<double> d = squared_magnitude(u[m]);
    if (p != 2.0)
      for (double& x : d) x = std::pow(x, 0.5 * p);
    acc.add(m, d);
  }
  return acc.profile();
}

double sobolev_norm(const VectorField& f, double s) {
  const PeriodicGrid& g = f.grid();
  double sum = 0.0;
  for (const auto& c : f.components()) {
    const Spectrum sp = to_spectral(c);
    for_each_mode(g, [&](const Mode& m) {
      if (m.k2 == 0.0) return;
      sum += m.weight * std::pow(m.k2, s) * std::norm(sp[m.index]);
    });
  }
  const double np = static_cast<double>(g.point_count());
  return std::sqrt(sum * g.volume() / (np * np));
}

double sobolev_norm(const ScalarField& f, double s) { return sobolev_norm(as_vector(f), s); }

EAlphaReport e_alpha_norm(const SpaceTimeField& u, double alpha, const BallFamily& balls) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("e_alpha_norm: alpha must lie in (0, 1)");
  if (!(u.grid() == balls.grid())) throw std::invalid_argument("e_alpha_norm: field and ball family grids differ");
  const TimeGrid& tg = u.time_grid();
  const auto t = tg.nodes();
  const std::size_t nt = t.size();
  if (nt < 5) throw std::invalid_argument("e_alpha_norm: need at least 5 time nodes");
  const PeriodicGrid& g = u.grid();
  const int dim = g.dim();
  const int nc = u.component_count();
  const std::size_t np = g.point_count();

  detail::TentAccumulator dt_acc(balls, tg, 1.0 - alpha, dim + 2.0 * (1.0 - alpha) - 4.0, 2.0);
  detail::TentAccumulator lap_acc(balls, tg, 1.0 - alpha, dim + 2.0 * (1.0 - alpha) - 4.0, 2.0);
  detail::TentAccumulator grad_acc(balls, tg, -alpha, dim - 2.0 * alpha - 2.0, 2.0);

  auto fd = [&](std::size_t m, std::size_t i0, std::size_t stride, int comp, std::vector<double>& out) {
    const double a = t[i0], b = t[i0 + stride], c = t[i0 + 2 * stride], x = t[m];
    const double w0 = ((x - b) + (x - c)) / ((a - b) * (a - c));
    const double w1 = ((x - a) + (x - c)) / ((b - a) * (b - c));
    const double w2 = ((x - a) + (x - b)) / ((c - a) * (c - b));
    const auto& f0 = u[i0][comp];
    const auto& f1 = u[i0 + stride][comp];
    const auto& f2 = u[i0 + 2 * stride][comp];
    for (std::size_t i = 0; i < np; ++i) out[i] = w0 * f0[i] + w1 * f1[i] + w2 * f2[i];
  };

  EAlphaReport rep;
  std::vector<double> d_dt(np), d_lap(np), d_grad(np), dh(np), d2h(np);
  double diff2 = 0.0, norm2 = 0.0;
  const std::size_t n2 = (nt - 1) / 2 + 1;  // nodes 0, 2, 4, ...
  for (std::size_t m = 0; m < nt; ++m) {
    const bool need = dt_acc.needed(m);
    std::fill(d_dt.begin(), d_dt.end(), 0.0);
    std::fill(d_lap.begin(), d_lap.end(), 0.0);
    std::fill(d_grad.begin(), d_grad.end(), 0.0);
    for (int c = 0; c < nc; ++c) {
      const std::size_t i0 = m == 0 ? 0 : (m == nt - 1 ? nt - 3 : m - 1);
      fd(m, i0, 1, c, dh);
      for (std::size_t i = 0; i < np; ++i) d_dt[i] += dh[i] * dh[i];
      if (m % 2 == 0 && n2 >= 3) {
        const std::size_t k = m / 2;
        const std::size_t j0 = k == 0 ? 0 : (k == n2 - 1 ? n2 - 3 : k - 1);
        fd(m, 2 * j0, 2, c, d2h);
        for (std::size_t i = 0; i < np; ++i) {
          diff2 += tg.weight(m) * (dh[i] - d2h[i]) * (dh[i] - d2h[i]);
          norm2 += tg.weight(m) * dh[i] * dh[i];
        }
      }
      if (!need) continue;
      const Spectrum s = to_spectral(u[m][c]);
      Spectrum lap = s;
      for_each_mode(g, [&](const Mode& md) { lap[md.index] *= -md.k2; });
      add_square(d_lap, to_physical(lap));
      for (int j = 0; j < dim; ++j) {
        Spectrum dj = s;
        for_each_mode(g, [&](const Mode& md) { dj[md.index] *= kI * md.kd[j]; });
        add_square(d_grad, to_physical(dj));
      }
    }
    if (need) {
      dt_acc.add(m, d_dt);
      lap_acc.add(m, d_lap);
      grad_acc.add(m, d_grad);
    }
    rep.sqrt_t_sup = std::max(rep.sqrt_t_sup, std::sqrt(t[m]) * u[m].max_abs());
  }
  rep.dt_norm = dt_acc.report("T", 1.0 - alpha).value;
  rep.lap_norm = lap_acc.report("T", 1.0 - alpha).value;
  rep.grad_norm = grad_acc.report("BoldT", -alpha).value;
  // Second-order differences: D_h - D_{2h} is about 3 times the error of D_h.
  rep.dt_rel_error = norm2 > 0.0 ? std::sqrt(diff2 / norm2) / 3.0 : 0.0;
  rep.dt_underresolved = rep.dt_rel_error > 0.05;

  BesovWindow window;
  window.per_octave = 2;
  window.refine = false;
  const std::size_t picks = std::min<std::size_t>(32, nt);
  for (std::size_t k = 0; k < picks; ++k) {
    const std::size_t m = picks == 1 ? nt - 1 : k * (nt - 1) / (picks - 1);
    rep.besov_sup = std::max(rep.besov_sup, besov_heatflow_norm(u[m], -1.0, BesovFlavor::inf_inf, window).value);
  }
  rep.total = std::max({rep.dt_norm, rep.lap_norm, rep.grad_norm, rep.sqrt_t_sup, rep.besov_sup});
  return rep;
}

}  // namespace tentflow
