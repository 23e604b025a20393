// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tentflow/grid.hpp"

namespace tentflow {

/// Cells intersecting a ball centered on a grid point, with the covered
/// fraction of each cell as weight.
struct BallStencil {
  double radius;
  std::vector<std::array<int, 3>> offsets;
  std::vector<double> weights;
  /// sum(weights) * h^dim
  double volume;
};

/// Builds the stencil of a ball of the given physical radius.
BallStencil make_ball_stencil(const PeriodicGrid& grid, double radius);

/// Finite family of balls (center on a grid point, radius) standing in for
/// the sup over all balls. Radii strictly decreasing, each <= L/4.
class BallFamily {
 public:
  BallFamily(const PeriodicGrid& grid, std::vector<std::array<int, 3>> centers, std::vector<double> radii);

  /// Centers on the sub-lattice of the given stride (0 = N/8), radii L 2^{-j}, j = 2..j_max.
  static BallFamily standard(const PeriodicGrid& grid, int center_stride = 0, int j_max = 5);
  /// Radii L 2^{-j} for j = j_min..j_max with explicit centers.
  static BallFamily dyadic(const PeriodicGrid& grid, std::vector<std::array<int, 3>> centers, int j_min, int j_max);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  const std::vector<std::array<int, 3>>& centers() const noexcept { return centers_; }
  const std::vector<double>& radii() const noexcept { return radii_; }
  std::size_t center_count() const noexcept { return centers_.size(); }
  std::size_t radius_count() const noexcept { return radii_.size(); }
  const BallStencil& stencil(std::size_t radius_index) const { return stencils_[radius_index]; }

  /// Physical coordinates of a center.
  std::array<double, 3> center_point(std::size_t center_index) const;

  /// sum over the ball of weight * g * h^dim, for a grid-sized array g.
  double ball_sum(std::size_t radius_index, std::size_t center_index, std::span<const double> g) const;

  std::string summary() const;

 private:
  PeriodicGrid grid_;
  std::vector<std::array<int, 3>> centers_;
  std::vector<double> radii_;
  std::vector<BallStencil> stencils_;
  // indices_[r][c]: flat grid indices of stencil r placed at center c.
  std::vector<std::vector<std::vector<std::uint32_t>>> indices_;
};

}  // namespace tentflow
