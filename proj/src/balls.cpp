// SPDX-License-Identifier: Apache-2.0
#include "tentflow/balls.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tentflow {
namespace {

// Fraction of the unit cell around integer offset d inside the ball of radius
// rad (grid units) centered at the origin.
double coverage(const std::array<int, 3>& d, int dim, double rad) {
  double near2 = 0.0, far2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double lo = std::abs(d[a]) - 0.5;
    const double hi = std::abs(d[a]) + 0.5;
    near2 += lo > 0.0 ? lo * lo : 0.0;
    far2 += hi * hi;
  }
  const double r2 = rad * rad;
  if (far2 <= r2) return 1.0;
  if (near2 >= r2) return 0.0;
  const int s = dim == 2 ? 24 : 10;
  int inside = 0;
  int total = 0;
  for (int i = 0; i < s; ++i) {
    const double x = d[0] - 0.5 + (i + 0.5) / s;
    for (int j = 0; j < s; ++j) {
      const double y = d[1] - 0.5 + (j + 0.5) / s;
      if (dim == 2) {
        inside += (x * x + y * y <= r2) ? 1 : 0;
        ++total;
        continue;
      }
      for (int k = 0; k < s; ++k) {
        const double z = d[2] - 0.5 + (k + 0.5) / s;
        inside += (x * x + y * y + z * z <= r2) ? 1 : 0;
        ++total;
      }
    }
  }
  return static_cast<double>(inside) / total;
}

}  // namespace

BallStencil make_ball_stencil(const PeriodicGrid& grid, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  const int dim = grid.dim();
  const double rad = radius / grid.spacing();
  const int reach = static_cast<int>(std::ceil(rad + 0.5));
  BallStencil st{radius, {}, {}, 0.0};
  double wsum = 0.0;
  const int r2 = dim == 3 ? reach : 0;
  for (int i = -reach; i <= reach; ++i)
    for (int j = -reach; j <= reach; ++j)
      for (int k = -r2; k <= r2; ++k) {
        const std::array<int, 3> d{i, j, k};
        const double w = coverage(d, dim, rad);
        if (w <= 0.0) continue;
        st.offsets.push_back(d);
        st.weights.push_back(w);
        wsum += w;
      }
  st.volume = wsum * grid.cell_volume();
  return st;
}

BallFamily::BallFamily(const PeriodicGrid& grid, std::vector<std::array<int, 3>> centers, std::vector<double> radii)
    : grid_(grid), centers_(std::move(centers)), radii_(std::move(radii)) {
  if (centers_.empty()) throw std::invalid_argument("BallFamily: no centers");
  if (radii_.size() < 3) throw std::invalid_argument("BallFamily: at least 3 radii required");
  const double cap = grid_.side_length() / 4.0 * (1.0 + 1e-12);
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (!(radii_[i] > 0.0) || radii_[i] > cap)
      throw std::invalid_argument("BallFamily: every radius must lie in (0, L/4]");
    if (i > 0 && !(radii_[i] < radii_[i - 1])) throw std::invalid_argument("BallFamily: radii must strictly decrease");
  }
  const int n = grid_.points_per_axis();
  for (auto& c : centers_) {
    for (int a = 0; a < 3; ++a) {
      if (a >= grid_.dim()) {
        c[a] = 0;
        continue;
      }
      c[a] = ((c[a] % n) + n) % n;
    }
  }
  stencils_.reserve(radii_.size());
  indices_.resize(radii_.size());
  for (std::size_t r = 0; r < radii_.size(); ++r) {
    stencils_.push_back(make_ball_stencil(grid_, radii_[r]));
    const auto& st = stencils_.back();
    indices_[r].resize(centers_.size());
    for (std::size_t c = 0; c < centers_.size(); ++c) {
      auto& idx = indices_[r][c];
      idx.reserve(st.offsets.size());
      for (const auto& d : st.offsets) {
        const std::array<long, 3> p{centers_[c][0] + d[0], centers_[c][1] + d[1], centers_[c][2] + d[2]};
        idx.push_back(static_cast<std::uint32_t>(grid_.flatten(p)));
      }
    }
  }
}

BallFamily BallFamily::standard(const PeriodicGrid& grid, int center_stride, int j_max) {
  const int n = grid.points_per_axis();
  const int stride = center_stride > 0 ? center_stride : std::max(1, n / 8);
  std::vector<std::array<int, 3>> centers;
  const int kmax = grid.dim() == 3 ? n : 1;
  for (int i = 0; i < n; i += stride)
    for (int j = 0; j < n; j += stride)
      for (int k = 0; k < kmax; k += stride) centers.push_back({i, j, k});
  return dyadic(grid, std::move(centers), 2, j_max);
}

BallFamily BallFamily::dyadic(const PeriodicGrid& grid, std::vector<std::array<int, 3>> centers, int j_min, int j_max) {
  if (j_min < 2) throw std::invalid_argument("BallFamily: j_min must be >= 2 (radius cap L/4)");
  std::vector<double> radii;
  for (int j = j_min; j <= j_max; ++j) radii.push_back(std::ldexp(grid.side_length(), -j));
  return BallFamily(grid, std::move(centers), std::move(radii));
}

std::array<double, 3> BallFamily::center_point(std::size_t center_index) const {
  const double h = grid_.spacing();
  const auto& c = centers_[center_index];
  return {c[0] * h, c[1] * h, grid_.dim() == 3 ? c[2] * h : 0.0};
}

double BallFamily::ball_sum(std::size_t radius_index, std::size_t center_index, std::span<const double> g) const {
  const auto& idx = indices_[radius_index][center_index];
  const auto& w = stencils_[radius_index].weights;
  double s = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) s += w[i] * g[idx[i]];
  return s * grid_.cell_volume();
}

std::string BallFamily::summary() const {
  std::ostringstream os;
  os << centers_.size() << " centers x " << radii_.size() << " radii [" << radii_.back() << ", " << radii_.front()
     << "]";
  return os.str();
}

}  // namespace tentflow
