// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft_plan.hpp"
#include "tentflow/field.hpp"

namespace tentflow {

ScalarField::ScalarField(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.point_count())
    throw std::invalid_argument("ScalarField: value count does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("ScalarField: non-finite value");
}

ScalarField ScalarField::zeros(const PeriodicGrid& grid) { return constant(grid, 0.0); }

ScalarField ScalarField::constant(const PeriodicGrid& grid, double value) {
  return ScalarField(grid, std::vector<double>(grid.point_count(), value));
}

double ScalarField::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s * grid_.cell_volume());
}

namespace {

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grids differ");
}

template <class Op>
ScalarField combine(const ScalarField& a, const ScalarField& b, Op op) {
  require_same_grid(a.grid(), b.grid(), "ScalarField arithmetic");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
  return ScalarField(a.grid(), std::move(v));
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x + y; });
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x - y; });
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x * y; });
}

ScalarField operator*(double c, const ScalarField& a) {
  std::vector<double> v(a.values().begin(), a.values().end());
  for (double& x : v) x *= c;
  return ScalarField(a.grid(), std::move(v));
}

double inner_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().cell_volume();
}

VectorField::VectorField(std::vector<ScalarField> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("VectorField: no components");
  for (const auto& c : components_) require_same_grid(c.grid(), components_.front().grid(), "VectorField");
}

VectorField VectorField::zeros(const PeriodicGrid& grid, int components) {
  if (components < 1) throw std::invalid_argument("VectorField: component count must be positive");
  return VectorField(std::vector<ScalarField>(static_cast<std::size_t>(components), ScalarField::zeros(grid)));
}

double VectorField::max_abs() const {
  const std::size_t n = components_.front().size();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (const auto& c : components_) s += c[i] * c[i];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

double VectorField::l2_norm() const {
  double s = 0.0;
  for (const auto& c : components_) {
    const double n = c.l2_norm();
    s += n * n;
  }
  return std::sqrt(s);
}

namespace {

template <class Op>
VectorField combine(const VectorField& a, const VectorField& b, Op op) {
  if (a.component_count() != b.component_count())
    throw std::invalid_argument("VectorField arithmetic: component counts differ");
  std::vector<ScalarField> out;
  out.reserve(static_cast<std::size_t>(a.component_count()));
  for (int c = 0; c < a.component_count(); ++c) out.push_back(op(a[c], b[c]));
  return VectorField(std::move(out));
}

}  // namespace

VectorField operator+(const VectorField& a, const VectorField& b) {
  return combine(a, b, [](const ScalarField& x, const ScalarField& y) { return x + y; });
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  return combine(a, b, [](const ScalarField& x, const ScalarField& y) { return x - y; });
}

VectorField operator*(double c, const VectorField& a) {
  std::vector<ScalarField> out;
  for (const auto& comp : a.components()) out.push_back(c * comp);
  return VectorField(std::move(out));
}

double inner_product(const VectorField& a, const VectorField& b) {
  if (a.component_count() != b.component_count())
    throw std::invalid_argument("inner_product: component counts differ");
  double s = 0.0;
  for (int c = 0; c < a.component_count(); ++c) s += inner_product(a[c], b[c]);
  return s;
}

VectorField as_vector(const ScalarField& f) { return VectorField({f}); }

Spectrum::Spectrum(PeriodicGrid grid, std::vector<Complex> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.mode_count()) throw std::invalid_argument("Spectrum: size does not match grid");
}

Spectrum Spectrum::zeros(const PeriodicGrid& grid) {
  return Spectrum(grid, std::vector<Complex>(grid.mode_count(), Complex(0.0, 0.0)));
}

double Spectrum::l2_norm() const {
  double s = 0.0;
  for_each_mode(grid_, [&](const Mode& m) { s += m.weight * std::norm(coeffs_[m.index]); });
  const double np = static_cast<double>(grid_.point_count());
  return std::sqrt(s * grid_.volume() / (np * np));
}

Spectrum to_spectral(const ScalarField& f) {
  std::vector<Complex> out(f.grid().mode_count());
  detail::forward_r2c(f.grid(), f.values().data(), out.data());
  return Spectrum(f.grid(), std::move(out));
}

ScalarField to_physical(const Spectrum& s) {
  std::vector<Complex> work(s.coeffs().begin(), s.coeffs().end());
  std::vector<double> out(s.grid().point_count());
  detail::inverse_c2r(s.grid(), work.data(), out.data());
  const double inv = 1.0 / static_cast<double>(out.size());
  for (double& v : out) v *= inv;
  return ScalarField(s.grid(), std::move(out));
}

std::vector<Spectrum> to_spectral(const VectorField& f) {
  std::vector<Spectrum> out;
  out.reserve(static_cast<std::size_t>(f.component_count()));
  for (const auto& c : f.components()) out.push_back(to_spectral(c));
  return out;
}

VectorField to_physical(const std::vector<Spectrum>& s) {
  std::vector<ScalarField> out;
  out.reserve(s.size());
  for (const auto& c : s) out.push_back(to_physical(c));
  return VectorField(std::move(out));
}

namespace {

// Coefficient of the full spectrum at signed mode m, using Hermitian symmetry.
Complex full_coefficient(const Spectrum& s, std::array<int, 3> m) {
  const PeriodicGrid& g = s.grid();
  const int d = g.dim();
  const int n = g.points_per_axis();
  bool conj = false;
  if (m[d - 1] < 0) {
    conj = true;
    for (int a = 0; a < d; ++a) m[a] = -m[a];
  }
  std::size_t flat = 0;
  for (int a = 0; a < d - 1; ++a) {
    int i = m[a] % n;
    if (i < 0) i += n;
    flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
  }
  flat = flat * static_cast<std::size_t>(n / 2 + 1) + static_cast<std::size_t>(m[d - 1]);
  const Complex c = s[flat];
  return conj ? std::conj(c) : c;
}

}  // namespace

ScalarField resample(const ScalarField& field, const PeriodicGrid& target) {
  const PeriodicGrid& src = field.grid();
  if (src.dim() != target.dim()) throw std::invalid_argument("resample: dimensions differ");
  if (src.points_per_axis() == target.points_per_axis())
    return ScalarField(target, std::vector<double>(field.values().begin(), field.values().end()));
  const Spectrum in = to_spectral(field);
  const int ns = src.points_per_axis();
  const int nt = target.points_per_axis();
  const double scale = std::pow(static_cast<double>(nt) / ns, src.dim());
  Spectrum out = Spectrum::zeros(target);
  for_each_mode(target, [&](const Mode& mode) {
    std::array<int, 3> m = mode.m;
    double factor = scale;
    for (int a = 0; a < target.dim(); ++a) {
      const int am = std::abs(m[a]);
      if (nt > ns) {
        if (am > ns / 2) return;
        // Source Nyquist content is split evenly between +N/2 and -N/2.
        if (am == ns / 2) factor *= 0.5;
      } else if (am >= nt / 2) {
        return;
      }
    }
    out[mode.index] = factor * full_coefficient(in, m);
  });
  return to_physical(out);
}

VectorField resample(const VectorField& field, const PeriodicGrid& target) {
  std::vector<ScalarField> out;
  for (const auto& c : field.components()) out.push_back(resample(c, target));
  return VectorField(std::move(out));
}

}  // namespace tentflow
