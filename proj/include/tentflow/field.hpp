// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "tentflow/grid.hpp"

namespace tentflow {

using Complex = std::complex<double>;
using Point = std::array<double, 3>;

/// Real field on a PeriodicGrid. Immutable; all values finite.
class ScalarField {
 public:
  ScalarField(PeriodicGrid grid, std::vector<double> values);

  static ScalarField zeros(const PeriodicGrid& grid);
  static ScalarField constant(const PeriodicGrid& grid, double value);

  /// Samples fn(x) at every grid point; x has dim() meaningful entries.
  template <class F>
  static ScalarField sample(const PeriodicGrid& grid, F&& fn) {
    std::vector<double> v(grid.point_count());
    const double h = grid.spacing();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto idx = grid.unflatten(i);
      Point x{0.0, 0.0, 0.0};
      for (int a = 0; a < grid.dim(); ++a) x[a] = idx[a] * h;
      v[i] = fn(x);
    }
    return ScalarField(grid, std::move(v));
  }

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  double mean() const;
  double max_abs() const;
  /// (sum |f|^2 h^dim)^(1/2).
  double l2_norm() const;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);
/// Pointwise product (no dealiasing).
ScalarField pointwise_product(const ScalarField& a, const ScalarField& b);
/// Discrete L^2 pairing sum a*b h^dim.
double inner_product(const ScalarField& a, const ScalarField& b);

/// Vector field: components on one shared grid.
class VectorField {
 public:
  explicit VectorField(std::vector<ScalarField> components);

  static VectorField zeros(const PeriodicGrid& grid, int components);

  const PeriodicGrid& grid() const noexcept { return components_.front().grid(); }
  int component_count() const noexcept { return static_cast<int>(components_.size()); }
  const ScalarField& operator[](int c) const { return components_[static_cast<std::size_t>(c)]; }
  const std::vector<ScalarField>& components() const noexcept { return components_; }

  /// max_x |f(x)| with the Euclidean norm over components.
  double max_abs() const;
  double l2_norm() const;

 private:
  std::vector<ScalarField> components_;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double c, const VectorField& a);
double inner_product(const VectorField& a, const VectorField& b);

/// Wraps a scalar as a one-component vector field.
VectorField as_vector(const ScalarField& f);

/// Real-to-complex half spectrum of a ScalarField (unnormalized forward DFT).
class Spectrum {
 public:
  Spectrum(PeriodicGrid grid, std::vector<Complex> coeffs);
  static Spectrum zeros(const PeriodicGrid& grid);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return coeffs_[i]; }

  /// Discrete L^2 norm of the represented field via Parseval.
  double l2_norm() const;

 private:
  PeriodicGrid grid_;
  std::vector<Complex> coeffs_;
};

Spectrum to_spectral(const ScalarField& f);
ScalarField to_physical(const Spectrum& s);
std::vector<Spectrum> to_spectral(const VectorField& f);
VectorField to_physical(const std::vector<Spectrum>& s);

/// Spectral interpolation onto a grid of the same dim (any L, any power-of-two N).
/// Values are interpreted in index space: point i of the target samples the
/// trigonometric interpolant at the fractional source index i * N_src / N_tgt.
ScalarField resample(const ScalarField& field, const PeriodicGrid& target);
VectorField resample(const VectorField& field, const PeriodicGrid& target);

}  // namespace tentflow
