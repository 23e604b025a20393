// SPDX-License-Identifier: Apache-2.0
#include "tentflow/time_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace tentflow {

TimeGrid::TimeGrid(std::vector<double> nodes, std::vector<double> weights, std::vector<double> edges)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), edges_(std::move(edges)) {
  if (nodes_.empty()) throw std::invalid_argument("TimeGrid: no nodes");
  if (weights_.size() != nodes_.size() || edges_.size() != nodes_.size() + 1)
    throw std::invalid_argument("TimeGrid: nodes, weights and edges have inconsistent sizes");
  for (std::size_t m = 0; m < nodes_.size(); ++m) {
    if (!(nodes_[m] > 0.0) || !(weights_[m] > 0.0))
      throw std::invalid_argument("TimeGrid: nodes and weights must be positive");
    if (m > 0 && !(nodes_[m] > nodes_[m - 1])) throw std::invalid_argument("TimeGrid: nodes must increase");
    if (!(edges_[m] <= nodes_[m] && nodes_[m] <= edges_[m + 1]))
      throw std::invalid_argument("TimeGrid: node outside its cell");
  }
  if (!(edges_.front() > 0.0)) throw std::invalid_argument("TimeGrid: cells must start above 0");
}

double TimeGrid::clipped_weight(std::size_t m, double upper) const noexcept {
  const double a = edges_[m];
  const double b = edges_[m + 1];
  if (upper >= b) return weights_[m];
  if (upper <= a) return 0.0;
  return weights_[m] * std::log(upper / a) / std::log(b / a);
}

bool TimeGrid::is_log_uniform(double rel_tol) const noexcept {
  if (nodes_.size() < 3) return true;
  const double r0 = nodes_[1] / nodes_[0];
  for (std::size_t m = 2; m < nodes_.size(); ++m)
    if (std::abs(nodes_[m] / nodes_[m - 1] - r0) > rel_tol * r0) return false;
  return true;
}

TimeGrid make_log_time_grid(double t_min, double t_max, int count) {
  if (!(t_min > 0.0)) throw std::invalid_argument("make_log_time_grid: t_min must be > 0");
  if (!(t_max > t_min)) throw std::invalid_argument("make_log_time_grid: empty range (t_max <= t_min)");
  if (count < 2) throw std::invalid_argument("make_log_time_grid: count must be >= 2");
  const double lo = std::log(t_min);
  const double dl = (std::log(t_max) - lo) / count;
  std::vector<double> nodes(static_cast<std::size_t>(count));
  std::vector<double> weights(nodes.size());
  std::vector<double> edges(nodes.size() + 1);
  for (int m = 0; m <= count; ++m) edges[static_cast<std::size_t>(m)] = std::exp(lo + m * dl);
  edges.front() = t_min;
  edges.back() = t_max;
  for (int m = 0; m < count; ++m) {
    const double t = std::exp(lo + (m + 0.5) * dl);
    nodes[static_cast<std::size_t>(m)] = t;
    weights[static_cast<std::size_t>(m)] = t * dl;
  }
  return TimeGrid(std::move(nodes), std::move(weights), std::move(edges));
}

SpaceTimeField::SpaceTimeField(TimeGrid time_grid, std::vector<VectorField> slices)
    : time_grid_(std::move(time_grid)), slices_(std::move(slices)) {
  if (slices_.size() != time_grid_.size())
    throw std::invalid_argument("SpaceTimeField: slice count does not match node count");
  for (const auto& s : slices_) {
    if (!(s.grid() == slices_.front().grid())) throw std::invalid_argument("SpaceTimeField: slices on different grids");
    if (s.component_count() != slices_.front().component_count())
      throw std::invalid_argument("SpaceTimeField: slices with different component counts");
  }
}

SpaceTimeField SpaceTimeField::zeros(const TimeGrid& time_grid, const PeriodicGrid& grid, int components) {
  return SpaceTimeField(time_grid, std::vector<VectorField>(time_grid.size(), VectorField::zeros(grid, components)));
}

double SpaceTimeField::l2_norm() const {
  double s = 0.0;
  for (std::size_t m = 0; m < slices_.size(); ++m) {
    const double n = slices_[m].l2_norm();
    s += time_grid_.weight(m) * n * n;
  }
  return std::sqrt(s);
}

namespace {

template <class Op>
SpaceTimeField combine(const SpaceTimeField& a, const SpaceTimeField& b, Op op) {
  if (a.size() != b.size()) throw std::invalid_argument("SpaceTimeField arithmetic: node counts differ");
  std::vector<VectorField> out;
  out.reserve(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) out.push_back(op(a[m], b[m]));
  return SpaceTimeField(a.time_grid(), std::move(out));
}

}  // namespace

SpaceTimeField operator+(const SpaceTimeField& a, const SpaceTimeField& b) {
  return combine(a, b, [](const VectorField& x, const VectorField& y) { return x + y; });
}

SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b) {
  return combine(a, b, [](const VectorField& x, const VectorField& y) { return x - y; });
}

SpaceTimeField operator*(double c, const SpaceTimeField& a) {
  std::vector<VectorField> out;
  out.reserve(a.size());
  for (const auto& s : a.slices()) out.push_back(c * s);
  return SpaceTimeField(a.time_grid(), std::move(out));
}

SpaceTimeField time_derivative(const SpaceTimeField& u) {
  const auto t = u.time_grid().nodes();
  const std::size_t nt = t.size();
  if (nt < 3) throw std::invalid_argument("time_derivative: need at least 3 nodes");
  const int nc = u.component_count();
  const std::size_t np = u.grid().point_count();
  std::vector<VectorField> out;
  out.reserve(nt);
  for (std::size_t m = 0; m < nt; ++m) {
    // Three-point Lagrange derivative at t[m] through nodes i0 < i1 < i2.
    const std::size_t i0 = m == 0 ? 0 : (m == nt - 1 ? nt - 3 : m - 1);
    const double a = t[i0], b = t[i0 + 1], c = t[i0 + 2], x = t[m];
    const double w0 = ((x - b) + (x - c)) / ((a - b) * (a - c));
    const double w1 = ((x - a) + (x - c)) / ((b - a) * (b - c));
    const double w2 = ((x - a) + (x - b)) / ((c - a) * (c - b));
    std::vector<ScalarField> comps;
    for (int k = 0; k < nc; ++k) {
      const auto& f0 = u[i0][k];
      const auto& f1 = u[i0 + 1][k];
      const auto& f2 = u[i0 + 2][k];
      std::vector<double> v(np);
      for (std::size_t i = 0; i < np; ++i) v[i] = w0 * f0[i] + w1 * f1[i] + w2 * f2[i];
      comps.emplace_back(u.grid(), std::move(v));
    }
    out.emplace_back(std::move(comps));
  }
  return SpaceTimeField(u.time_grid(), std::move(out));
}

}  // namespace tentflow
