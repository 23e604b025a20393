// SPDX-License-Identifier: Apache-2.0
// Shared helpers for the unit and acceptance tests.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tentflow/field.hpp"

namespace testing_support {

using tentflow::PeriodicGrid;
using tentflow::Point;
using tentflow::ScalarField;
using tentflow::VectorField;

inline constexpr double kPi = std::numbers::pi;

/// Random trigonometric polynomial with |m_a| <= kmax on every axis (no Nyquist content
/// when kmax < N/2) and zero mean.
inline ScalarField random_trig(const PeriodicGrid& g, int kmax, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  struct Term {
    int m0, m1, m2;
    double a, b;
  };
  std::vector<Term> terms;
  const int k2 = g.dim() == 3 ? kmax : 0;
  for (int m0 = -kmax; m0 <= kmax; ++m0)
    for (int m1 = -kmax; m1 <= kmax; ++m1)
      for (int m2 = -k2; m2 <= k2; ++m2) {
        if (m0 == 0 && m1 == 0 && m2 == 0) continue;
        terms.push_back({m0, m1, m2, nd(rng), nd(rng)});
      }
  const double L = g.side_length();
  return ScalarField::sample(g, [&](const Point& x) {
    double s = 0.0;
    for (const auto& t : terms) {
      const double ph = 2.0 * kPi / L * (t.m0 * x[0] + t.m1 * x[1] + t.m2 * x[2]);
      s += t.a * std::cos(ph) + t.b * std::sin(ph);
    }
    return s / std::sqrt(static_cast<double>(terms.size()));
  });
}

inline VectorField random_trig_vector(const PeriodicGrid& g, int kmax, unsigned seed) {
  std::vector<ScalarField> c;
  for (int a = 0; a < g.dim(); ++a) c.push_back(random_trig(g, kmax, seed + 101u * static_cast<unsigned>(a)));
  return VectorField(std::move(c));
}

/// Unnormalized Gaussian exp(-|x-c|^2 / (2 s^2)) with minimum-image distance.
inline ScalarField gaussian_bump(const PeriodicGrid& g, const Point& c, double s) {
  const double L = g.side_length();
  return ScalarField::sample(g, [&](const Point& x) {
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      double d = x[a] - c[a];
      d -= L * std::round(d / L);
      r2 += d * d;
    }
    return std::exp(-r2 / (2.0 * s * s));
  });
}

/// Periodized normalized Gaussian density of variance var per axis.
inline double periodized_gaussian(const PeriodicGrid& g, const Point& x, const Point& c, double var) {
  const double L = g.side_length();
  double prod = 1.0;
  for (int a = 0; a < g.dim(); ++a) {
    double s = 0.0;
    for (int j = -6; j <= 6; ++j) {
      const double d = x[a] - c[a] + j * L;
      s += std::exp(-d * d / (2.0 * var));
    }
    prod *= s / std::sqrt(2.0 * kPi * var);
  }
  return prod;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (int c = 0; c < a.component_count(); ++c) m = std::max(m, max_abs_diff(a[c], b[c]));
  return m;
}

}  // namespace testing_support
