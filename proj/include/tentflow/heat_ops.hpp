// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tentflow/field.hpp"
#include "tentflow/time_grid.hpp"

namespace tentflow {

/// Fourier multiplier given by its symbol on the discrete modes.
struct MultiplierOp {
  std::function<Complex(const Mode&)> symbol;
  std::string label;

  void apply_in_place(Spectrum& s) const;
  ScalarField apply(const ScalarField& f) const;
  VectorField apply(const VectorField& f) const;
};

/// e^{-t|k|^2}.
MultiplierOp heat_multiplier(double t);
/// -|k|^2.
MultiplierOp laplacian_multiplier();
/// i k_j (Nyquist component dropped).
MultiplierOp derivative_multiplier(int axis);
/// i k_j / |k|, zero mode mapped to 0.
MultiplierOp riesz_multiplier(int axis);
/// t (i k_j) e^{-t^2 |k|^2}.
MultiplierOp psi_multiplier(double t, int axis);

ScalarField heat_semigroup(const ScalarField& f, double t);
VectorField heat_semigroup(const VectorField& f, double t);

/// (4 pi t)^{-dim/2} exp(-|x|^2 / (4t)).
double heat_kernel_eval(const Point& x, double t, int dim);

/// Components t * d_k e^{t^2 Delta} f, k = 0..dim-1.
VectorField psi_convolve(const ScalarField& f, double t);

ScalarField riesz_transform(const ScalarField& f, int axis);
VectorField leray_project(const VectorField& u);
/// Leray projection on per-component spectra (dim components).
void leray_project_in_place(std::vector<Spectrum>& u_hat);

ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& f);
ScalarField partial_derivative(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
/// Gradient of each component, ordered component-major: index c * dim + j.
VectorField gradient(const VectorField& f);
ScalarField divergence(const VectorField& u);

/// Removes modes with any |m_a| > fraction * N / 2.
void dealias_in_place(Spectrum& s, double fraction);
ScalarField dealias(const ScalarField& f, double fraction);
/// Truncate both factors, multiply pointwise, truncate the product.
ScalarField dealiased_product(const ScalarField& a, const ScalarField& b, double fraction);

enum class DuhamelDerivative { none, gradient };

/// int_0^t Delta e^{(t-s)Delta} u(s) ds at every node of u's time grid.
SpaceTimeField maximal_regularity(const SpaceTimeField& u);
/// int_0^t e^{(t-s)Delta} f(s) ds (or its gradient) at every node of f's time grid.
SpaceTimeField duhamel(const SpaceTimeField& f, DuhamelDerivative derivative = DuhamelDerivative::none);
/// Same integral evaluated at arbitrary increasing times; each must be >= the first node.
std::vector<VectorField> duhamel_at(const SpaceTimeField& f, std::span<const double> times,
                                    DuhamelDerivative derivative = DuhamelDerivative::none);

/// Duhamel integral on spectra: f_hat[node][component]; returns the same layout.
std::vector<std::vector<Spectrum>> duhamel_spectral(const TimeGrid& grid,
                                                    const std::vector<std::vector<Spectrum>>& f_hat);

/// e^{2^{-k} Delta} a.
ScalarField mollify(const ScalarField& a, int k);
VectorField mollify(const VectorField& a, int k);

}  // namespace tentflow
