// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "tentflow/verify_harness.hpp"

namespace tentflow {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// SplitMix64 stream; draws are platform independent (no std distributions).
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index, std::uint64_t component)
      : state_(seed * 0x9E3779B97F4A7C15ull ^ (index + 1) * 0xBF58476D1CE4E5B9ull ^ (component + 7) * 0x94D049BB133111EBull) {
    next();
  }
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t state_;
};

using ModeKey = std::array<int, 3>;

bool canonical(const ModeKey& m) {
  for (int v : m) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;
}

ModeKey negate(const ModeKey& m) { return {-m[0], -m[1], -m[2]}; }

// Field sum_m c_m e^{i k.x} with c_{-m} = conj(c_m); `coeffs` holds canonical modes only.
ScalarField synthesize(const PeriodicGrid& g, const std::map<ModeKey, Complex>& coeffs) {
  Spectrum s = Spectrum::zeros(g);
  const double np = static_cast<double>(g.point_count());
  const int half = g.points_per_axis() / 2;
  for (const auto& [m, c] : coeffs)
    for (int a = 0; a < g.dim(); ++a)
      if (std::abs(m[a]) >= half) throw std::invalid_argument("ensemble: grid too coarse for the sample spectrum");
  for_each_mode(g, [&](const Mode& md) {
    const ModeKey key{md.m[0], md.m[1], md.m[2]};
    if (auto it = coeffs.find(key); it != coeffs.end()) {
      s[md.index] = it->second * np;
    } else if (auto jt = coeffs.find(negate(key)); jt != coeffs.end()) {
      s[md.index] = std::conj(jt->second) * np;
    }
  });
  return to_physical(s);
}

template <class F>
void for_each_box_mode(int dim, int kmax, F&& fn) {
  const int k2 = dim == 3 ? kmax : 0;
  for (int a = -kmax; a <= kmax; ++a)
    for (int b = -kmax; b <= kmax; ++b)
      for (int c = -k2; c <= k2; ++c) {
        const ModeKey m{a, b, c};
        if (canonical(m)) fn(m);
      }
}

ScalarField band_limited(const PeriodicGrid& g, Stream& rng) {
  std::map<ModeKey, Complex> c;
  double total = 0.0;
  for_each_box_mode(g.dim(), 8, [&](const ModeKey& m) {
    const double m2 = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
    const double amp = 1.0 / (1.0 + 0.1 * m2);
    const Complex z(rng.normal() * amp, rng.normal() * amp);
    c[m] = z;
    total += 2.0 * std::norm(z);
  });
  for (auto& [m, z] : c) z /= std::sqrt(total);
  return synthesize(g, c);
}

ScalarField plane_waves(const PeriodicGrid& g, Stream& rng) {
  std::map<ModeKey, Complex> c;
  const int count = rng.integer(3, 6);
  for (int w = 0; w < count; ++w) {
    ModeKey m{0, 0, 0};
    while (!canonical(m) && !canonical(negate(m)))
      for (int a = 0; a < g.dim(); ++a) m[a] = rng.integer(-12, 12);
    const double amp = rng.normal();
    const double phase = kTwoPi * rng.uniform();
    Complex z = 0.5 * amp * std::polar(1.0, phase);
    if (!canonical(m)) {
      m = negate(m);
      z = std::conj(z);
    }
    c[m] += z;
  }
  return synthesize(g, c);
}

ScalarField rough(const PeriodicGrid& g, Stream& rng, double s) {
  constexpr int kmax = 20;
  std::map<ModeKey, Complex> c;
  double total = 0.0;
  for_each_box_mode(g.dim(), kmax, [&](const ModeKey& m) {
    const double m2 = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
    if (m2 > kmax * kmax) return;
    const double amp = std::pow(m2, -0.5 * (0.5 * g.dim() + s));
    const Complex z(rng.normal() * amp, rng.normal() * amp);
    c[m] = z;
    total += 2.0 * std::norm(z);
  });
  for (auto& [m, z] : c) z /= std::sqrt(total);
  return synthesize(g, c);
}

ScalarField bumps(const PeriodicGrid& g, Stream& rng) {
  const double L = g.side_length();
  const int count = rng.integer(1, 3);
  struct Bump {
    Point c;
    double sigma, amp;
  };
  std::vector<Bump> list;
  for (int b = 0; b < count; ++b) {
    Bump bp{{0.0, 0.0, 0.0}, 0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a) bp.c[a] = L * rng.uniform();
    bp.sigma = L / 24.0 + (L / 12.0 - L / 24.0) * rng.uniform();
    bp.amp = rng.normal();
    list.push_back(bp);
  }
  const ScalarField f = ScalarField::sample(g, [&](const Point& x) {
    double v = 0.0;
    for (const auto& bp : list) {
      // Periodized over the nearest images on each axis.
      double prod = 1.0;
      for (int a = 0; a < g.dim(); ++a) {
        double s = 0.0;
        for (int j = -1; j <= 1; ++j) {
          const double d = x[a] - bp.c[a] + j * L;
          s += std::exp(-d * d / (2.0 * bp.sigma * bp.sigma));
        }
        prod *= s;
      }
      v += bp.amp * prod;
    }
    return v;
  });
  return f - ScalarField::constant(g, f.mean());
}

}  // namespace

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::band_limited_random: return "band_limited_random";
    case EnsembleKind::localized_bumps: return "localized_bumps";
    case EnsembleKind::plane_wave_mix: return "plane_wave_mix";
    case EnsembleKind::slobodeckij_rough: return "slobodeckij_rough";
  }
  return "?";
}

EnsembleKind ensemble_kind_from_string(const std::string& name) {
  for (EnsembleKind k : {EnsembleKind::band_limited_random, EnsembleKind::localized_bumps, EnsembleKind::plane_wave_mix,
                         EnsembleKind::slobodeckij_rough})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown ensemble kind '" + name + "'");
}

void Ensemble::validate() const {
  if (size < 1) throw std::invalid_argument("ensemble: size must be >= 1");
  if (components < 1 || components > 3) throw std::invalid_argument("ensemble: components must lie in [1, 3]");
  if (!(roughness > 0.0 && roughness < 2.0)) throw std::invalid_argument("ensemble: roughness must lie in (0, 2)");
}

VectorField Ensemble::sample(const PeriodicGrid& grid, int index) const {
  validate();
  if (index < 0 || index >= size) throw std::out_of_range("ensemble: sample index out of range");
  std::vector<ScalarField> comps;
  for (int c = 0; c < components; ++c) {
    Stream rng(seed, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(c));
    switch (kind) {
      case EnsembleKind::band_limited_random: comps.push_back(band_limited(grid, rng)); break;
      case EnsembleKind::localized_bumps: comps.push_back(bumps(grid, rng)); break;
      case EnsembleKind::plane_wave_mix: comps.push_back(plane_waves(grid, rng)); break;
      case EnsembleKind::slobodeckij_rough: comps.push_back(rough(grid, rng, roughness)); break;
    }
  }
  return VectorField(std::move(comps));
}

}  // namespace tentflow
