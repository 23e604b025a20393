// SPDX-License-Identifier: Apache-2.0
#include "tentflow/ns_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "tentflow/heat_ops.hpp"

namespace tentflow {

void SolverConfig::validate() const {
  if (dim != 2 && dim != 3) throw std::invalid_argument("solver: dim must be 2 or 3");
  if (!(L > 0.0)) throw std::invalid_argument("solver: L must be positive");
  if (N < 8 || (N & (N - 1)) != 0) throw std::invalid_argument("solver: N must be a power of two >= 8");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("solver: alpha must lie in (0, 1)");
  if (!(eps0 > 0.0)) throw std::invalid_argument("solver: eps0 must be positive");
  if (!(t_final > 0.0)) throw std::invalid_argument("solver: t_final must be positive");
  if (time_nodes < 16) throw std::invalid_argument("solver: time_nodes must be >= 16");
  if (picard_max < 1) throw std::invalid_argument("solver: picard_max must be >= 1");
  if (!(picard_tol > 0.0 && picard_tol < 1.0)) throw std::invalid_argument("solver: picard_tol must lie in (0, 1)");
  if (!(dealias_fraction > 0.5 && dealias_fraction <= 1.0))
    throw std::invalid_argument("solver: dealias_fraction must lie in (1/2, 1]");
  if (mollify_k < 0) throw std::invalid_argument("solver: mollify_k must be >= 0");
  if (!(t_min_factor > 0.0)) throw std::invalid_argument("solver: t_min_factor must be positive");
  const double h = L / N;
  if (t_min_factor * h * h > 1e-3 * t_final)
    throw std::invalid_argument("solver: t_final too short for the grid (first node must be <= 1e-3 t_final)");
  if (t_final < std::pow(L / 32.0, 2.0))
    throw std::invalid_argument("solver: t_final must cover r^2 for radius L/32");
}

PeriodicGrid SolverConfig::grid() const { return PeriodicGrid(dim, L, N); }

TimeGrid SolverConfig::time_grid() const {
  const double h = L / N;
  return make_log_time_grid(t_min_factor * h * h, t_final, time_nodes);
}

BallFamily SolverConfig::balls() const {
  int j_min = 2;
  while (std::pow(std::ldexp(L, -j_min), 2.0) > t_final * (1.0 + 1e-12)) ++j_min;
  const PeriodicGrid g = grid();
  BallFamily standard = BallFamily::standard(g);
  return BallFamily::dyadic(g, standard.centers(), j_min, j_min + 3);
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "CONVERGED";
    case SolveStatus::max_iters: return "MAX_ITERS";
    case SolveStatus::diverged: return "DIVERGED";
  }
  return "?";
}

namespace {

constexpr Complex kI{0.0, 1.0};

double grad_energy(const std::vector<Spectrum>& u_hat) {
  const PeriodicGrid& g = u_hat.front().grid();
  double s = 0.0;
  for (const auto& c : u_hat) for_each_mode(g, [&](const Mode& m) { s += m.weight * m.k2 * std::norm(c[m.index]); });
  const double np = static_cast<double>(g.point_count());
  return s * g.volume() / (np * np);
}

double max_divergence(const std::vector<Spectrum>& u_hat) {
  const PeriodicGrid& g = u_hat.front().grid();
  Spectrum div = Spectrum::zeros(g);
  for (int a = 0; a < g.dim(); ++a)
    for_each_mode(g, [&](const Mode& m) { div[m.index] += kI * m.kd[a] * u_hat[static_cast<std::size_t>(a)][m.index]; });
  return to_physical(div).max_abs();
}

void require_finite(const std::vector<Spectrum>& s) {
  for (const auto& c : s)
    for (const auto& z : c.coeffs())
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DivergenceError("non-finite values in Picard iterate");
}

// Spectra of P(rho (u . grad) u), products dealiased, zero mode removed.
std::vector<Spectrum> advection_term(std::vector<Spectrum> u_hat, const ScalarField* rho, double frac) {
  const PeriodicGrid& g = u_hat.front().grid();
  const int d = g.dim();
  std::vector<ScalarField> u_phys;
  for (auto& c : u_hat) {
    dealias_in_place(c, frac);
    u_phys.push_back(to_physical(c));
  }
  std::vector<Spectrum> out;
  std::optional<ScalarField> rho_t;
  if (rho != nullptr) rho_t = dealias(*rho, frac);
  for (int c = 0; c < d; ++c) {
    std::vector<double> acc(g.point_count(), 0.0);
    for (int j = 0; j < d; ++j) {
      Spectrum dj = u_hat[static_cast<std::size_t>(c)];
      for_each_mode(g, [&](const Mode& m) { dj[m.index] *= kI * m.kd[j]; });
      const ScalarField deriv = to_physical(dj);
      const ScalarField& uj = u_phys[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += uj[i] * deriv[i];
    }
    Spectrum s = to_spectral(ScalarField(g, std::move(acc)));
    dealias_in_place(s, frac);
    if (rho_t) {
      s = to_spectral(pointwise_product(*rho_t, to_physical(s)));
      dealias_in_place(s, frac);
    }
    s[0] = 0.0;
    out.push_back(std::move(s));
  }
  leray_project_in_place(out);
  return out;
}

// Spectra of P(a dt_u), dealiased, zero mode removed.
std::vector<Spectrum> inertia_term(const ScalarField& rho, const VectorField& dt_u, double frac) {
  const PeriodicGrid& g = rho.grid();
  const ScalarField a_t = dealias(rho, frac) - ScalarField::constant(g, 1.0);
  std::vector<Spectrum> out;
  for (const auto& c : dt_u.components()) {
    Spectrum s = to_spectral(pointwise_product(a_t, dealias(c, frac)));
    dealias_in_place(s, frac);
    s[0] = 0.0;
    out.push_back(std::move(s));
  }
  leray_project_in_place(out);
  return out;
}

double interp(const ScalarField& f, const std::array<double, 3>& x) {
  const PeriodicGrid& g = f.grid();
  const int n = g.points_per_axis();
  const double h = g.spacing();
  std::array<long, 3> i0{0, 0, 0};
  std::array<double, 3> fr{0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) {
    const double p = x[a] / h;
    const double fl = std::floor(p);
    i0[a] = static_cast<long>(fl);
    fr[a] = p - fl;
  }
  // Corner values, reduced axis by axis with a + t (b - a) so constants stay exact.
  std::array<double, 8> v{};
  const int corners = 1 << g.dim();
  for (int c = 0; c < corners; ++c) {
    std::array<long, 3> idx{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) idx[a] = ((i0[a] + ((c >> a) & 1)) % n + n) % n;
    v[static_cast<std::size_t>(c)] = f[g.flatten(idx)];
  }
  for (int a = 0, len = corners; a < g.dim(); ++a, len /= 2)
    for (int c = 0; c < len / 2; ++c) {
      const double lo = v[static_cast<std::size_t>(2 * c)];
      const double hi = v[static_cast<std::size_t>(2 * c + 1)];
      v[static_cast<std::size_t>(c)] = lo + fr[a] * (hi - lo);
    }
  return v[0];
}

VectorField velocity_at(const SpaceTimeField& u, double t) {
  const auto nodes = u.time_grid().nodes();
  if (t <= nodes.front()) return u[0];
  if (t >= nodes.back()) return u[nodes.size() - 1];
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
  const std::size_t m = static_cast<std::size_t>(it - nodes.begin()) - 1;
  const double th = (t - nodes[m]) / (nodes[m + 1] - nodes[m]);
  return (1.0 - th) * u[m] + th * u[m + 1];
}

// One midpoint back-trace step of length dt with velocity field v at the half step.
ScalarField semi_lagrangian_step(const ScalarField& rho, const VectorField& v, double dt) {
  const PeriodicGrid& g = rho.grid();
  const int d = g.dim();
  const double h = g.spacing();
  const double cap = g.side_length() / 4.0;
  std::vector<double> out(g.point_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto idx = g.unflatten(i);
    std::array<double, 3> x{0.0, 0.0, 0.0}, mid{0.0, 0.0, 0.0}, dep{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) {
      x[a] = idx[a] * h;
      mid[a] = x[a] - 0.5 * dt * v[a][i];
    }
    double disp2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double step = dt * interp(v[a], mid);
      dep[a] = x[a] - step;
      disp2 += step * step;
    }
    if (std::sqrt(disp2) > cap) throw std::runtime_error("transport_density: back-trace excursion beyond L/4");
    out[i] = interp(rho, dep);
  }
  return ScalarField(g, std::move(out));
}

std::vector<double> max_dev_from_one(const SpaceTimeField& rho) {
  std::vector<double> out;
  for (const auto& s : rho.slices()) {
    double m = 0.0;
    for (double v : s[0].values()) m = std::max(m, std::abs(v - 1.0));
    out.push_back(m);
  }
  return out;
}

SpaceTimeField transport_along(const ScalarField& rho0, const SpaceTimeField& u) {
  const auto nodes = u.time_grid().nodes();
  std::vector<VectorField> slices;
  slices.reserve(nodes.size());
  ScalarField cur = transport_density(rho0, u, 0.0, nodes[0]);
  slices.emplace_back(std::vector<ScalarField>{cur});
  for (std::size_t m = 1; m < nodes.size(); ++m) {
    cur = transport_density(cur, u, nodes[m - 1], nodes[m]);
    slices.emplace_back(std::vector<ScalarField>{cur});
  }
  return SpaceTimeField(u.time_grid(), std::move(slices));
}

DiagnosticsRow diagnose(int iter, const SpaceTimeField& u, const SpaceTimeField& rho, const VectorField& u0,
                        const SolverConfig& cfg, const BallFamily& balls) {
  DiagnosticsRow row;
  row.iter = iter;
  row.e_alpha = e_alpha_norm(u, cfg.alpha, balls);
  row.rho_dev = max_dev_from_one(rho);
  const EnergyReport en = energy_check(u, u0);
  row.energy_lhs = en.lhs;
  row.energy_rhs = en.rhs;
  for (const auto& s : u.slices()) row.div_max.push_back(max_divergence(to_spectral(s)));
  return row;
}

SolverState make_state(SpaceTimeField u, SpaceTimeField rho_traj, int iter, const ScalarField& rho_initial) {
  SpaceTimeField dt_u = time_derivative(u);
  const ScalarField rho_last = rho_traj[rho_traj.size() - 1][0];
  const ScalarField a_last = rho_last - ScalarField::constant(rho_last.grid(), 1.0);
  return SolverState{rho_initial, rho_last, a_last, std::move(rho_traj), std::move(u), std::move(dt_u), iter, {}};
}

SpaceTimeField heat_trajectory(const VectorField& u0, const TimeGrid& tg) {
  const auto u0_hat = to_spectral(u0);
  std::vector<VectorField> slices;
  for (double t : tg.nodes()) {
    std::vector<Spectrum> s = u0_hat;
    for (auto& c : s) for_each_mode(c.grid(), [&](const Mode& m) { c[m.index] *= std::exp(-t * m.k2); });
    slices.push_back(to_physical(s));
  }
  return SpaceTimeField(tg, std::move(slices));
}

}  // namespace

PreparedData prepare_data(const VectorField& u0_raw, const ScalarField& rho0, const SolverConfig& cfg) {
  cfg.validate();
  const PeriodicGrid g = cfg.grid();
  if (!(u0_raw.grid() == g) || !(rho0.grid() == g)) throw std::invalid_argument("prepare_data: data not on the configured grid");
  if (u0_raw.component_count() != cfg.dim) throw std::invalid_argument("prepare_data: velocity needs dim components");
  double dev = 0.0;
  for (double v : rho0.values()) {
    if (!(v > 0.0)) throw std::invalid_argument("prepare_data: density must be positive everywhere");
    dev = std::max(dev, std::abs(v - 1.0));
  }
  if (dev > cfg.eps0)
    throw std::invalid_argument("prepare_data: ||rho0 - 1||_inf exceeds eps0 (density cannot be rescaled)");
  const BallFamily balls = cfg.balls();
  PreparedData out{leray_project(mollify(u0_raw, cfg.mollify_k)), rho0};
  out.rho_dev = dev;
  out.raw_norm = u_alpha_norm(u0_raw, cfg.alpha, balls).value;
  out.mollified_norm = u_alpha_norm(out.u0, cfg.alpha, balls).value;
  out.c_moll = out.raw_norm > 0.0 ? out.mollified_norm / out.raw_norm : 0.0;
  const double budget = cfg.eps0 - dev;
  if (out.mollified_norm > budget) {
    out.rescale_factor = budget / out.mollified_norm;
    out.u0 = out.rescale_factor * out.u0;
  }
  out.u0_norm = out.rescale_factor == 1.0 ? out.mollified_norm : u_alpha_norm(out.u0, cfg.alpha, balls).value;
  return out;
}

ScalarField transport_density(const ScalarField& rho, const SpaceTimeField& u_traj, double t_from, double t_to) {
  if (!(t_from <= t_to) || t_from < 0.0) throw std::invalid_argument("transport_density: need 0 <= t_from <= t_to");
  const auto nodes = u_traj.time_grid().nodes();
  if (t_to > nodes.back() * (1.0 + 1e-12)) throw std::invalid_argument("transport_density: t_to beyond trajectory");
  if (!(rho.grid() == u_traj.grid())) throw std::invalid_argument("transport_density: grids differ");
  if (u_traj.component_count() != rho.grid().dim())
    throw std::invalid_argument("transport_density: velocity needs dim components");
  std::vector<double> breaks{t_from};
  for (double t : nodes)
    if (t > t_from && t < t_to) breaks.push_back(t);
  if (t_to > t_from) breaks.push_back(t_to);
  const double h = rho.grid().spacing();
  ScalarField cur = rho;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double a = breaks[s], b = breaks[s + 1];
    const double umax = std::max(velocity_at(u_traj, a).max_abs(), velocity_at(u_traj, b).max_abs());
    const int sub = std::max(1, static_cast<int>(std::ceil(umax * (b - a) / h)));
    const double dt = (b - a) / sub;
    for (int k = 0; k < sub; ++k) cur = semi_lagrangian_step(cur, velocity_at(u_traj, a + (k + 0.5) * dt), dt);
  }
  return cur;
}

SolverState initial_state(const VectorField& u0, const ScalarField& rho0, const SolverConfig& cfg) {
  const TimeGrid tg = cfg.time_grid();
  SpaceTimeField u = heat_trajectory(u0, tg);
  SpaceTimeField rho = transport_along(rho0, u);
  SolverState st = make_state(std::move(u), std::move(rho), 0, rho0);
  st.diagnostics.push_back(diagnose(0, st.u_traj, st.rho_traj, u0, cfg, cfg.balls()));
  return st;
}

std::pair<SolverState, DuhamelSplit> picard_step(const SolverState& state, const VectorField& u0,
                                                 const SolverConfig& cfg) {
  const TimeGrid& tg = state.u_traj.time_grid();
  const std::size_t nt = tg.size();
  if (state.dt_u_traj.size() != nt || state.rho_traj.size() != nt)
    throw std::invalid_argument("picard_step: state trajectories are inconsistent");
  const double frac = cfg.dealias_fraction;
  std::vector<std::vector<Spectrum>> f1(nt), f2(nt);
  for (std::size_t m = 0; m < nt; ++m) {
    const ScalarField& rho = state.rho_traj[m][0];
    f1[m] = advection_term(to_spectral(state.u_traj[m]), &rho, frac);
    f2[m] = inertia_term(rho, state.dt_u_traj[m], frac);
  }
  const auto d1 = duhamel_spectral(tg, f1);
  const auto d2 = duhamel_spectral(tg, f2);
  f1.clear();
  f2.clear();

  SpaceTimeField u_l = heat_trajectory(u0, tg);
  std::vector<VectorField> v, w, u;
  for (std::size_t m = 0; m < nt; ++m) {
    require_finite(d1[m]);
    require_finite(d2[m]);
    v.push_back(-1.0 * to_physical(d1[m]));
    w.push_back(-1.0 * to_physical(d2[m]));
    u.push_back(u_l[m] + v.back() + w.back());
  }
  DuhamelSplit split{std::move(u_l), SpaceTimeField(tg, std::move(v)), SpaceTimeField(tg, std::move(w))};
  SpaceTimeField u_new(tg, std::move(u));

  SpaceTimeField rho_new = transport_along(state.rho_initial, u_new);
  const double diff = (u_new - state.u_traj).l2_norm();
  const double base = u_new.l2_norm();
  const double e_old = state.diagnostics.empty() ? 0.0 : state.diagnostics.back().e_alpha.total;

  SolverState next = make_state(std::move(u_new), std::move(rho_new), state.iterate_index + 1, state.rho_initial);
  next.diagnostics = state.diagnostics;
  DiagnosticsRow row = diagnose(next.iterate_index, next.u_traj, next.rho_traj, u0, cfg, cfg.balls());
  row.increment = base > 0.0 ? diff / base : (diff > 0.0 ? 1.0 : 0.0);
  const double e_new = row.e_alpha.total;
  row.e_alpha_change = e_new > 0.0 ? std::abs(e_new - e_old) / e_new : (e_old > 0.0 ? 1.0 : 0.0);
  next.diagnostics.push_back(std::move(row));
  return {std::move(next), std::move(split)};
}

SolveResult solve(const VectorField& u0_raw, const ScalarField& rho0, const SolverConfig& cfg) {
  PreparedData data = prepare_data(u0_raw, rho0, cfg);
  SolverState start = initial_state(data.u0, rho0, cfg);
  SolveResult res{std::move(start), EAlphaReport{}, SolveStatus::max_iters, std::move(data), ""};
  for (int it = 1; it <= cfg.picard_max; ++it) {
    try {
      auto [next, split] = picard_step(res.state, res.data.u0, cfg);
      res.state = std::move(next);
    } catch (const DivergenceError& e) {
      res.status = SolveStatus::diverged;
      res.message = e.what();
      break;
    }
    const DiagnosticsRow& row = res.state.diagnostics.back();
    if (!std::isfinite(row.e_alpha.total) || row.increment > 1e6) {
      res.status = SolveStatus::diverged;
      res.message = "Picard increments blew up";
      break;
    }
    if (row.increment < cfg.picard_tol && row.e_alpha_change < cfg.picard_tol) {
      res.status = SolveStatus::converged;
      break;
    }
  }
  res.e_alpha = res.state.diagnostics.back().e_alpha;
  return res;
}

SpaceTimeField reference_solve(const VectorField& u0, const SolverConfig& cfg) {
  cfg.validate();
  const PeriodicGrid g = cfg.grid();
  if (!(u0.grid() == g) || u0.component_count() != cfg.dim)
    throw std::invalid_argument("reference_solve: data not on the configured grid");
  const TimeGrid tg = cfg.time_grid();
  // Carpenter-Kennedy five-stage fourth-order 2N-storage coefficients.
  static constexpr double A[5] = {0.0, -567301805773.0 / 1357537059087.0, -2404267990393.0 / 2016746695238.0,
                                  -3550918686646.0 / 2091501179385.0, -1275806237668.0 / 842570457699.0};
  static constexpr double B[5] = {1432997174477.0 / 9575080441755.0, 5161836677717.0 / 13612068292357.0,
                                  1720146321549.0 / 2090206949498.0, 3134564353537.0 / 4481467310338.0,
                                  2277821191437.0 / 14882151754819.0};
  static constexpr double C[5] = {0.0, 1432997174477.0 / 9575080441755.0, 2526269341429.0 / 6820363183890.0,
                                  2006345519317.0 / 3224310063776.0, 2802321613138.0 / 2924317926251.0};
  std::vector<double> k2(g.mode_count());
  for_each_mode(g, [&](const Mode& m) { k2[m.index] = m.k2; });
  const double h = g.spacing();
  // Keep the integrating-factor exponent |k|^2 dt moderate on the retained modes.
  const double k_keep = 2.0 * std::numbers::pi / cfg.L * cfg.dealias_fraction * cfg.N / 2.0;
  const double dt_cap = std::min(cfg.t_final / 200.0, 40.0 / (cfg.dim * k_keep * k_keep));

  std::vector<Spectrum> u_hat = to_spectral(u0);
  std::vector<VectorField> out;
  double t = 0.0;
  for (double target : tg.nodes()) {
    while (t < target) {
      const double umax = to_physical(u_hat).max_abs();
      double dt = dt_cap;
      if (umax > 0.0) dt = std::min(dt, 0.5 * h / umax);
      if (!(dt > 1e-14)) throw std::runtime_error("reference_solve: CFL violation (time step collapsed)");
      const int steps = static_cast<int>(std::ceil((target - t) / dt));
      dt = (target - t) / steps;
      for (int s = 0; s < steps; ++s) {
        // Integrating factor: w(tau) = e^{|k|^2 (tau - t)} u_hat(tau).
        std::vector<Spectrum> w = u_hat;
        std::vector<Spectrum> q(w.size(), Spectrum::zeros(g));
        for (int st = 0; st < 5; ++st) {
          const double c = C[st] * dt;
          std::vector<Spectrum> stage = w;
          for (auto& comp : stage)
            for (std::size_t i = 0; i < k2.size(); ++i) comp[i] *= std::exp(-k2[i] * c);
          std::vector<Spectrum> nl = advection_term(stage, nullptr, cfg.dealias_fraction);
          for (std::size_t a = 0; a < w.size(); ++a)
            for (std::size_t i = 0; i < k2.size(); ++i) {
              const Complex f = nl[a][i] == Complex(0.0, 0.0) ? Complex(0.0, 0.0) : -std::exp(k2[i] * c) * nl[a][i];
              q[a][i] = A[st] * q[a][i] + dt * f;
              w[a][i] += B[st] * q[a][i];
            }
        }
        for (std::size_t a = 0; a < w.size(); ++a)
          for (std::size_t i = 0; i < k2.size(); ++i) u_hat[a][i] = w[a][i] * std::exp(-k2[i] * dt);
        require_finite(u_hat);
      }
      t = target;
    }
    out.push_back(to_physical(u_hat));
  }
  return SpaceTimeField(tg, std::move(out));
}

namespace {

// int over a segment of length dt of a function with end values ga, gb, interpolated
// exponentially (exact for single-mode heat decay), linearly when that degenerates.
double segment_integral(double dt, double ga, double gb) {
  if (ga > 0.0 && gb > 0.0) {
    const double lr = std::log(gb / ga);
    if (std::abs(lr) > 1e-8) return dt * (gb - ga) / lr;
  }
  return 0.5 * dt * (ga + gb);
}

EnergyReport energy_impl(const SpaceTimeField& traj, const VectorField* u0) {
  const auto t = traj.time_grid().nodes();
  std::vector<double> e(t.size()), gr(t.size());
  for (std::size_t m = 0; m < t.size(); ++m) {
    const auto s = to_spectral(traj[m]);
    const double n = traj[m].l2_norm();
    e[m] = 0.5 * n * n;
    gr[m] = grad_energy(s);
  }
  EnergyReport rep;
  double integral;
  if (u0 != nullptr) {
    const double n0 = u0->l2_norm();
    rep.rhs = 0.5 * n0 * n0;
    integral = segment_integral(t[0], grad_energy(to_spectral(*u0)), gr[0]);
  } else {
    integral = t[0] * gr[0];
    rep.rhs = e[0] + integral;
  }
  rep.lhs.resize(t.size());
  for (std::size_t m = 0; m < t.size(); ++m) {
    if (m > 0) integral += segment_integral(t[m] - t[m - 1], gr[m - 1], gr[m]);
    rep.lhs[m] = e[m] + integral;
    const double excess = rep.rhs > 0.0 ? (rep.lhs[m] - rep.rhs) / rep.rhs : (rep.lhs[m] > 0.0 ? 1.0 : 0.0);
    rep.max_excess = std::max(rep.max_excess, excess);
  }
  rep.pass = rep.max_excess <= 1e-3;
  return rep;
}

}  // namespace

EnergyReport energy_check(const SpaceTimeField& traj) { return energy_impl(traj, nullptr); }

EnergyReport energy_check(const SpaceTimeField& traj, const VectorField& u0) { return energy_impl(traj, &u0); }

}  // namespace tentflow
