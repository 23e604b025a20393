// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tentflow/tent_norms.hpp"

namespace tentflow {
namespace {

struct ModeData {
  std::vector<double> k2;
  std::vector<double> weight;
  std::vector<Spectrum> spectra;
};

double evaluate(const ModeData& md, const PeriodicGrid& g, double s, BesovFlavor flavor, double t) {
  const double pre = std::pow(t, -0.5 * s);
  if (flavor == BesovFlavor::two_inf) {
    double sum = 0.0;
    for (const auto& sp : md.spectra)
      for (std::size_t i = 0; i < md.k2.size(); ++i)
        if (md.k2[i] > 0.0) sum += md.weight[i] * std::exp(-2.0 * t * md.k2[i]) * std::norm(sp[i]);
    const double np = static_cast<double>(g.point_count());
    return pre * std::sqrt(sum * g.volume() / (np * np));
  }
  std::vector<double> mag(g.point_count(), 0.0);
  for (const auto& sp : md.spectra) {
    Spectrum heated = sp;
    for (std::size_t i = 0; i < md.k2.size(); ++i) heated[i] = md.k2[i] > 0.0 ? heated[i] * std::exp(-t * md.k2[i]) : 0.0;
    const ScalarField f = to_physical(heated);
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += f[i] * f[i];
  }
  return pre * std::sqrt(*std::max_element(mag.begin(), mag.end()));
}

}  // namespace

BesovReport besov_heatflow_norm(const VectorField& f, double s, BesovFlavor flavor, const BesovWindow& window) {
  const PeriodicGrid& g = f.grid();
  const double expected = flavor == BesovFlavor::inf_inf ? -1.0 : -1.0 + 0.5 * g.dim();
  if (std::abs(s - expected) > 1e-12)
    throw std::invalid_argument("besov_heatflow_norm: s must be -1 (inf_inf) or -1 + n/2 (two_inf)");
  const double h = g.spacing();
  const double t_lo = window.t_lo > 0.0 ? window.t_lo : 1e-2 * h * h;
  const double t_hi = window.t_hi > 0.0 ? window.t_hi : g.side_length() * g.side_length();
  if (!(t_hi > t_lo)) throw std::invalid_argument("besov_heatflow_norm: empty window");
  if (window.per_octave < 1) throw std::invalid_argument("besov_heatflow_norm: per_octave must be >= 1");

  ModeData md;
  md.k2.resize(g.mode_count());
  md.weight.resize(g.mode_count());
  for_each_mode(g, [&](const Mode& m) {
    md.k2[m.index] = m.k2;
    md.weight[m.index] = m.weight;
  });
  md.spectra = to_spectral(f);

  const int count = std::max(2, static_cast<int>(std::ceil(std::log2(t_hi / t_lo) * window.per_octave)) + 1);
  const double dl = std::log(t_hi / t_lo) / (count - 1);
  std::vector<double> vals(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) vals[static_cast<std::size_t>(i)] = evaluate(md, g, s, flavor, t_lo * std::exp(i * dl));
  const auto best = std::max_element(vals.begin(), vals.end());
  const int ib = static_cast<int>(best - vals.begin());

  BesovReport rep;
  rep.value = *best;
  rep.t_at_max = t_lo * std::exp(ib * dl);
  rep.at_endpoint = ib == 0 || ib == count - 1;
  if (rep.value == 0.0) {
    rep.at_endpoint = false;
    return rep;
  }
  if (window.refine && !rep.at_endpoint) {
    // Golden-section search in log t on the bracketing cells.
    double a = std::log(t_lo) + (ib - 1) * dl;
    double b = std::log(t_lo) + (ib + 1) * dl;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = evaluate(md, g, s, flavor, std::exp(x1));
    double f2 = evaluate(md, g, s, flavor, std::exp(x2));
    for (int it = 0; it < 40; ++it) {
      if (f1 > f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = evaluate(md, g, s, flavor, std::exp(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = evaluate(md, g, s, flavor, std::exp(x2));
      }
    }
    const double fx = std::max(f1, f2);
    if (fx > rep.value) {
      rep.value = fx;
      rep.t_at_max = std::exp(f1 > f2 ? x1 : x2);
    }
  }
  return rep;
}

BesovReport besov_heatflow_norm(const ScalarField& f, double s, BesovFlavor flavor, const BesovWindow& window) {
  return besov_heatflow_norm(as_vector(f), s, flavor, window);
}

}  // namespace tentflow
