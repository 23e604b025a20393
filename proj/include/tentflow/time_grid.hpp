// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tentflow/field.hpp"

namespace tentflow {

/// Quadrature nodes t_1 < ... < t_M with positive weights for integrals in t.
/// Node m owns the cell [edges[m], edges[m+1]].
class TimeGrid {
 public:
  TimeGrid(std::vector<double> nodes, std::vector<double> weights, std::vector<double> edges);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double node(std::size_t m) const noexcept { return nodes_[m]; }
  double weight(std::size_t m) const noexcept { return weights_[m]; }
  double lower_edge() const noexcept { return edges_.front(); }
  double upper_edge() const noexcept { return edges_.back(); }

  /// Weight of cell m restricted to t <= upper (log-proportional clipping).
  double clipped_weight(std::size_t m, double upper) const noexcept;

  /// Whether consecutive node ratios agree to rel_tol.
  bool is_log_uniform(double rel_tol = 1e-10) const noexcept;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> edges_;
};

/// count log-uniform cells over [t_min, t_max]; nodes at log-midpoints, weight t_m * dlog.
TimeGrid make_log_time_grid(double t_min, double t_max, int count);

/// A field sampled on each node of a TimeGrid.
class SpaceTimeField {
 public:
  SpaceTimeField(TimeGrid time_grid, std::vector<VectorField> slices);

  static SpaceTimeField zeros(const TimeGrid& time_grid, const PeriodicGrid& grid, int components);

  const TimeGrid& time_grid() const noexcept { return time_grid_; }
  const PeriodicGrid& grid() const noexcept { return slices_.front().grid(); }
  int component_count() const noexcept { return slices_.front().component_count(); }
  std::size_t size() const noexcept { return slices_.size(); }
  const VectorField& operator[](std::size_t m) const { return slices_[m]; }
  const std::vector<VectorField>& slices() const noexcept { return slices_; }

  /// (sum_m w_m ||u(t_m)||^2)^(1/2).
  double l2_norm() const;

 private:
  TimeGrid time_grid_;
  std::vector<VectorField> slices_;
};

SpaceTimeField operator+(const SpaceTimeField& a, const SpaceTimeField& b);
SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b);
SpaceTimeField operator*(double c, const SpaceTimeField& a);

/// Centered non-uniform finite difference in t (one-sided second order at the ends).
SpaceTimeField time_derivative(const SpaceTimeField& u);

}  // namespace tentflow
