// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>

namespace tentflow {

/// Uniform periodic grid on the torus [0, L)^dim with N points per axis.
/// Data is stored row-major with axis 0 slowest; point i sits at x = i * h.
class PeriodicGrid {
 public:
  PeriodicGrid(int dim, double side_length, int points_per_axis);

  int dim() const noexcept { return dim_; }
  double side_length() const noexcept { return side_length_; }
  int points_per_axis() const noexcept { return n_; }
  double spacing() const noexcept { return side_length_ / n_; }

  /// N^dim.
  std::size_t point_count() const noexcept { return point_count_; }
  /// Size of the real-to-complex half spectrum, N^(dim-1) * (N/2 + 1).
  std::size_t mode_count() const noexcept { return mode_count_; }
  int half_modes() const noexcept { return n_ / 2 + 1; }

  /// Flat index of a (wrapped) multi-index; unused trailing entries are ignored.
  std::size_t flatten(std::array<long, 3> idx) const noexcept;
  std::array<int, 3> unflatten(std::size_t flat) const noexcept;

  /// Volume of one cell, h^dim.
  double cell_volume() const noexcept;
  /// L^dim.
  double volume() const noexcept;

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  int dim_;
  double side_length_;
  int n_;
  std::size_t point_count_;
  std::size_t mode_count_;
};

/// Signed mode number for index i on an axis of length n: (-n/2, n/2].
inline int signed_mode(int i, int n) noexcept { return i <= n / 2 ? i : i - n; }

/// One entry of the half spectrum.
struct Mode {
  std::size_t index;       ///< flat index into the half spectrum
  std::array<int, 3> m;    ///< signed mode numbers
  std::array<double, 3> k; ///< wavenumbers 2*pi*m/L
  std::array<double, 3> kd;///< derivative wavenumbers (Nyquist set to 0)
  double k2;               ///< |k|^2
  double kd2;              ///< |kd|^2
  double weight;           ///< multiplicity in the full spectrum (1 or 2)
  bool nyquist;            ///< any axis at |m| = N/2
};

/// Visits every half-spectrum mode in storage order.
template <class F>
void for_each_mode(const PeriodicGrid& grid, F&& fn) {
  const int n = grid.points_per_axis();
  const int nh = grid.half_modes();
  const int d = grid.dim();
  const double two_pi_over_l = 2.0 * 3.14159265358979323846 / grid.side_length();
  const int n0 = n;
  const int n1 = d == 3 ? n : 1;
  Mode mode{};
  std::size_t flat = 0;
  for (int i0 = 0; i0 < n0; ++i0) {
    for (int i1 = 0; i1 < n1; ++i1) {
      for (int il = 0; il < nh; ++il, ++flat) {
        mode.index = flat;
        mode.m = {0, 0, 0};
        mode.m[0] = signed_mode(i0, n);
        if (d == 3) mode.m[1] = signed_mode(i1, n);
        mode.m[d - 1] = il;
        mode.k2 = 0.0;
        mode.kd2 = 0.0;
        mode.nyquist = false;
        for (int a = 0; a < 3; ++a) {
          mode.k[a] = a < d ? two_pi_over_l * mode.m[a] : 0.0;
          const bool nyq = a < d && (mode.m[a] == n / 2 || mode.m[a] == -n / 2);
          mode.nyquist = mode.nyquist || nyq;
          mode.kd[a] = nyq ? 0.0 : mode.k[a];
          mode.k2 += mode.k[a] * mode.k[a];
          mode.kd2 += mode.kd[a] * mode.kd[a];
        }
        mode.weight = (il == 0 || il == n / 2) ? 1.0 : 2.0;
        fn(static_cast<const Mode&>(mode));
      }
    }
  }
}

}  // namespace tentflow
