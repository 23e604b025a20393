// SPDX-License-Identifier: Apache-2.0
#include "tentflow/heat_ops.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tentflow {
namespace {

constexpr Complex kI{0.0, 1.0};

void check_axis(const PeriodicGrid& g, int axis) {
  if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("axis index out of range: " + std::to_string(axis));
}

template <class Symbol>
ScalarField apply_symbol(const ScalarField& f, Symbol&& symbol) {
  Spectrum s = to_spectral(f);
  for_each_mode(f.grid(), [&](const Mode& m) { s[m.index] *= symbol(m); });
  return to_physical(s);
}

// (1 - e^{-z}) / z
double phi1(double z) { return z < 1e-12 ? 1.0 - 0.5 * z : -std::expm1(-z) / z; }

// (1 - e^{-z}(1 + z)) / z^2
double psi(double z) {
  if (z < 0.1) {
    double term = 1.0;
    double sum = 0.0;
    for (int k = 0; k <= 10; ++k) {
      if (k > 0) term *= -z / k;
      sum += term / (k + 2);
    }
    return sum;
  }
  return (1.0 - std::exp(-z) * (1.0 + z)) / (z * z);
}

void check_start_near_zero(const TimeGrid& tg) {
  if (tg.size() < 2 || tg.node(0) > 1e-3 * tg.node(tg.size() - 1))
    throw std::invalid_argument("time grid must start near 0 (t_1 <= 1e-3 t_M) for Duhamel-type integrals");
}

enum class Output { duhamel, gradient, maxreg };

// Per-mode exponential recursion, f piecewise linear between nodes and equal
// to f(t_1) on [0, t_1]. Output times must be increasing and >= t_1.
std::vector<std::vector<Spectrum>> integrate(const TimeGrid& tg, const std::vector<std::vector<Spectrum>>& f_hat,
                                             std::span<const double> times, Output kind) {
  const auto nodes = tg.nodes();
  const PeriodicGrid& g = f_hat.front().front().grid();
  const std::size_t nc = f_hat.front().size();
  const std::size_t nm = g.mode_count();
  std::vector<double> lambda(nm);
  for_each_mode(g, [&](const Mode& m) { lambda[m.index] = m.k2; });

  std::vector<std::vector<Complex>> acc(nc, std::vector<Complex>(nm));
  double t_acc = nodes[0];
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t i = 0; i < nm; ++i) acc[c][i] = nodes[0] * phi1(lambda[i] * nodes[0]) * f_hat[0][c][i];

  std::vector<double> decay(nm), wa(nm), wb(nm);
  std::size_t node = 0;  // acc holds D(t_acc) with t_acc = nodes[node]
  std::vector<std::vector<Spectrum>> out;
  out.reserve(times.size());
  double prev = 0.0;
  for (double t : times) {
    if (t < nodes[0]) throw std::invalid_argument("requested output time precedes the first input node");
    if (t < prev) throw std::invalid_argument("output times must be increasing");
    prev = t;
    while (node + 1 < nodes.size() && nodes[node + 1] <= t) {
      const double dt = nodes[node + 1] - t_acc;
      for (std::size_t i = 0; i < nm; ++i) {
        const double z = lambda[i] * dt;
        decay[i] = std::exp(-z);
        wa[i] = dt * psi(z);
        wb[i] = dt * phi1(z) - wa[i];
      }
      for (std::size_t c = 0; c < nc; ++c) {
        const auto& fa = f_hat[node][c];
        const auto& fb = f_hat[node + 1][c];
        auto& ac = acc[c];
        for (std::size_t i = 0; i < nm; ++i) ac[i] = decay[i] * ac[i] + wa[i] * fa[i] + wb[i] * fb[i];
      }
      ++node;
      t_acc = nodes[node];
    }
    // Partial cell from the last node to t, with f linearly interpolated.
    std::vector<Spectrum> slice;
    const double dt = t - t_acc;
    const bool partial = dt > 0.0 && node + 1 < nodes.size();
    const double theta = partial ? dt / (nodes[node + 1] - nodes[node]) : 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
      std::vector<Complex> d = acc[c];
      if (dt > 0.0) {
        const auto& fa = f_hat[node][c];
        const auto& fn = partial ? f_hat[node + 1][c] : f_hat[node][c];
        for (std::size_t i = 0; i < nm; ++i) {
          const double z = lambda[i] * dt;
          const Complex fb = fa[i] + theta * (fn[i] - fa[i]);
          d[i] = std::exp(-z) * d[i] + dt * (psi(z) * fa[i] + (phi1(z) - psi(z)) * fb);
        }
      }
      if (kind == Output::maxreg) {
        for (std::size_t i = 0; i < nm; ++i) d[i] *= -lambda[i];
        slice.emplace_back(g, std::move(d));
      } else if (kind == Output::gradient) {
        Spectrum base(g, std::move(d));
        for (int j = 0; j < g.dim(); ++j) {
          Spectrum dj = base;
          for_each_mode(g, [&](const Mode& m) { dj[m.index] *= kI * m.kd[j]; });
          slice.push_back(std::move(dj));
        }
      } else {
        slice.emplace_back(g, std::move(d));
      }
    }
    out.push_back(std::move(slice));
  }
  return out;
}

std::vector<std::vector<Spectrum>> spectra_of(const SpaceTimeField& f) {
  std::vector<std::vector<Spectrum>> out;
  out.reserve(f.size());
  for (const auto& s : f.slices()) out.push_back(to_spectral(s));
  return out;
}

SpaceTimeField to_space_time(const TimeGrid& tg, const std::vector<std::vector<Spectrum>>& spectra) {
  std::vector<VectorField> slices;
  slices.reserve(spectra.size());
  for (const auto& s : spectra) slices.push_back(to_physical(s));
  return SpaceTimeField(tg, std::move(slices));
}

}  // namespace

void MultiplierOp::apply_in_place(Spectrum& s) const {
  for_each_mode(s.grid(), [&](const Mode& m) { s[m.index] *= symbol(m); });
}

ScalarField MultiplierOp::apply(const ScalarField& f) const {
  Spectrum s = to_spectral(f);
  apply_in_place(s);
  return to_physical(s);
}

VectorField MultiplierOp::apply(const VectorField& f) const {
  std::vector<ScalarField> out;
  for (const auto& c : f.components()) out.push_back(apply(c));
  return VectorField(std::move(out));
}

MultiplierOp heat_multiplier(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat semigroup: t must be >= 0");
  return {[t](const Mode& m) { return Complex(std::exp(-t * m.k2), 0.0); }, "heat"};
}

MultiplierOp laplacian_multiplier() {
  return {[](const Mode& m) { return Complex(-m.k2, 0.0); }, "laplacian"};
}

MultiplierOp derivative_multiplier(int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("derivative: axis out of range");
  return {[axis](const Mode& m) { return kI * m.kd[axis]; }, "d" + std::to_string(axis)};
}

MultiplierOp riesz_multiplier(int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("riesz: axis out of range");
  return {[axis](const Mode& m) { return m.kd2 > 0.0 ? kI * (m.kd[axis] / std::sqrt(m.kd2)) : Complex(0.0, 0.0); },
          "riesz" + std::to_string(axis)};
}

MultiplierOp psi_multiplier(double t, int axis) {
  if (!(t > 0.0)) throw std::invalid_argument("psi: t must be > 0");
  if (axis < 0 || axis > 2) throw std::invalid_argument("psi: axis out of range");
  return {[t, axis](const Mode& m) { return kI * (t * m.kd[axis] * std::exp(-t * t * m.k2)); }, "psi"};
}

ScalarField heat_semigroup(const ScalarField& f, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat_semigroup: t must be >= 0");
  if (t == 0.0) return f;
  return apply_symbol(f, [t](const Mode& m) { return std::exp(-t * m.k2); });
}

VectorField heat_semigroup(const VectorField& f, double t) {
  std::vector<ScalarField> out;
  for (const auto& c : f.components()) out.push_back(heat_semigroup(c, t));
  return VectorField(std::move(out));
}

double heat_kernel_eval(const Point& x, double t, int dim) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_eval: t must be > 0");
  if (dim < 1 || dim > 3) throw std::invalid_argument("heat_kernel_eval: dim must be 1..3");
  double r2 = 0.0;
  for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
  return std::pow(4.0 * std::numbers::pi * t, -0.5 * dim) * std::exp(-r2 / (4.0 * t));
}

VectorField psi_convolve(const ScalarField& f, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("psi_convolve: t must be > 0");
  const Spectrum base = to_spectral(f);
  std::vector<ScalarField> out;
  for (int j = 0; j < f.grid().dim(); ++j) {
    Spectrum s = base;
    for_each_mode(f.grid(), [&](const Mode& m) { s[m.index] *= kI * (t * m.kd[j] * std::exp(-t * t * m.k2)); });
    out.push_back(to_physical(s));
  }
  return VectorField(std::move(out));
}

ScalarField riesz_transform(const ScalarField& f, int axis) {
  check_axis(f.grid(), axis);
  return riesz_multiplier(axis).apply(f);
}

void leray_project_in_place(std::vector<Spectrum>& u_hat) {
  const PeriodicGrid& g = u_hat.front().grid();
  const int d = g.dim();
  if (static_cast<int>(u_hat.size()) != d)
    throw std::invalid_argument("leray_project: component count must equal the grid dimension");
  for_each_mode(g, [&](const Mode& m) {
    if (m.kd2 == 0.0) return;
    Complex dot(0.0, 0.0);
    for (int a = 0; a < d; ++a) dot += m.kd[a] * u_hat[static_cast<std::size_t>(a)][m.index];
    dot /= m.kd2;
    for (int a = 0; a < d; ++a) u_hat[static_cast<std::size_t>(a)][m.index] -= m.kd[a] * dot;
  });
}

VectorField leray_project(const VectorField& u) {
  auto s = to_spectral(u);
  leray_project_in_place(s);
  return to_physical(s);
}

ScalarField laplacian(const ScalarField& f) {
  return apply_symbol(f, [](const Mode& m) { return -m.k2; });
}

VectorField laplacian(const VectorField& f) {
  std::vector<ScalarField> out;
  for (const auto& c : f.components()) out.push_back(laplacian(c));
  return VectorField(std::move(out));
}

ScalarField partial_derivative(const ScalarField& f, int axis) {
  check_axis(f.grid(), axis);
  return apply_symbol(f, [axis](const Mode& m) { return kI * m.kd[axis]; });
}

VectorField gradient(const ScalarField& f) {
  const Spectrum base = to_spectral(f);
  std::vector<ScalarField> out;
  for (int j = 0; j < f.grid().dim(); ++j) {
    Spectrum s = base;
    for_each_mode(f.grid(), [&](const Mode& m) { s[m.index] *= kI * m.kd[j]; });
    out.push_back(to_physical(s));
  }
  return VectorField(std::move(out));
}

VectorField gradient(const VectorField& f) {
  std::vector<ScalarField> out;
  for (const auto& c : f.components()) {
    VectorField g = gradient(c);
    for (const auto& gc : g.components()) out.push_back(gc);
  }
  return VectorField(std::move(out));
}

ScalarField divergence(const VectorField& u) {
  const PeriodicGrid& g = u.grid();
  if (u.component_count() != g.dim()) throw std::invalid_argument("divergence: component count must equal dim");
  Spectrum acc = Spectrum::zeros(g);
  for (int a = 0; a < g.dim(); ++a) {
    const Spectrum s = to_spectral(u[a]);
    for_each_mode(g, [&](const Mode& m) { acc[m.index] += kI * m.kd[a] * s[m.index]; });
  }
  return to_physical(acc);
}

void dealias_in_place(Spectrum& s, double fraction) {
  const double cut = fraction * s.grid().points_per_axis() / 2.0;
  for_each_mode(s.grid(), [&](const Mode& m) {
    for (int a = 0; a < s.grid().dim(); ++a) {
      if (std::abs(m.m[a]) > cut) {
        s[m.index] = 0.0;
        return;
      }
    }
  });
}

ScalarField dealias(const ScalarField& f, double fraction) {
  Spectrum s = to_spectral(f);
  dealias_in_place(s, fraction);
  return to_physical(s);
}

ScalarField dealiased_product(const ScalarField& a, const ScalarField& b, double fraction) {
  return dealias(pointwise_product(dealias(a, fraction), dealias(b, fraction)), fraction);
}

SpaceTimeField maximal_regularity(const SpaceTimeField& u) {
  check_start_near_zero(u.time_grid());
  return to_space_time(u.time_grid(), integrate(u.time_grid(), spectra_of(u), u.time_grid().nodes(), Output::maxreg));
}

SpaceTimeField duhamel(const SpaceTimeField& f, DuhamelDerivative derivative) {
  check_start_near_zero(f.time_grid());
  const Output kind = derivative == DuhamelDerivative::gradient ? Output::gradient : Output::duhamel;
  return to_space_time(f.time_grid(), integrate(f.time_grid(), spectra_of(f), f.time_grid().nodes(), kind));
}

std::vector<VectorField> duhamel_at(const SpaceTimeField& f, std::span<const double> times,
                                    DuhamelDerivative derivative) {
  check_start_near_zero(f.time_grid());
  const Output kind = derivative == DuhamelDerivative::gradient ? Output::gradient : Output::duhamel;
  std::vector<VectorField> out;
  for (const auto& s : integrate(f.time_grid(), spectra_of(f), times, kind)) out.push_back(to_physical(s));
  return out;
}

std::vector<std::vector<Spectrum>> duhamel_spectral(const TimeGrid& grid,
                                                    const std::vector<std::vector<Spectrum>>& f_hat) {
  check_start_near_zero(grid);
  if (f_hat.size() != grid.size()) throw std::invalid_argument("duhamel_spectral: node count mismatch");
  return integrate(grid, f_hat, grid.nodes(), Output::duhamel);
}

ScalarField mollify(const ScalarField& a, int k) {
  if (k < 0) throw std::invalid_argument("mollify: k must be >= 0");
  return heat_semigroup(a, std::ldexp(1.0, -k));
}

VectorField mollify(const VectorField& a, int k) {
  if (k < 0) throw std::invalid_argument("mollify: k must be >= 0");
  return heat_semigroup(a, std::ldexp(1.0, -k));
}

}  // namespace tentflow
