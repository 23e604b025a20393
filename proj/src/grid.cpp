// SPDX-License-Identifier: Apache-2.0
#include "tentflow/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tentflow {

PeriodicGrid::PeriodicGrid(int dim, double side_length, int points_per_axis)
    : dim_(dim), side_length_(side_length), n_(points_per_axis) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("grid: dim must be 2 or 3, got " + std::to_string(dim));
  if (!(side_length > 0.0) || !std::isfinite(side_length))
    throw std::invalid_argument("grid: side length must be positive and finite");
  if (points_per_axis < 4 || (points_per_axis & (points_per_axis - 1)) != 0)
    throw std::invalid_argument("grid: points per axis must be a power of two >= 4, got " +
                                std::to_string(points_per_axis));
  const auto n = static_cast<std::size_t>(n_);
  point_count_ = dim == 2 ? n * n : n * n * n;
  mode_count_ = (dim == 2 ? n : n * n) * static_cast<std::size_t>(n_ / 2 + 1);
}

std::size_t PeriodicGrid::flatten(std::array<long, 3> idx) const noexcept {
  const long n = n_;
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) {
    long i = idx[a] % n;
    if (i < 0) i += n;
    flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
  }
  return flat;
}

std::array<int, 3> PeriodicGrid::unflatten(std::size_t flat) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  const auto n = static_cast<std::size_t>(n_);
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

double PeriodicGrid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

double PeriodicGrid::volume() const noexcept { return std::pow(side_length_, dim_); }

}  // namespace tentflow
