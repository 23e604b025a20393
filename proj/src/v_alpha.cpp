// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "tentflow/heat_ops.hpp"
#include "tentflow/tent_norms.hpp"

namespace tentflow {
namespace {

// Spectrum of the kernel |z|^{-(n+2a)} (minimum image, zero at z = 0) on an M-box.
Spectrum kernel_spectrum(const PeriodicGrid& box, double alpha) {
  const double h = box.spacing();
  const int m = box.points_per_axis();
  const double ex = -(box.dim() + 2.0 * alpha);
  return to_spectral(ScalarField::sample(box, [&](const Point& x) {
    double r2 = 0.0;
    for (int a = 0; a < box.dim(); ++a) {
      double i = std::round(x[a] / h);
      if (i > m / 2) i -= m;
      r2 += i * i;
    }
    return r2 == 0.0 ? 0.0 : std::pow(std::sqrt(r2) * h, ex);
  }));
}

ScalarField convolve(const Spectrum& kernel, const ScalarField& f) {
  Spectrum s = to_spectral(f);
  for (std::size_t i = 0; i < s.coeffs().size(); ++i) s[i] *= kernel[i];
  return to_physical(s);
}

// int over the difference of two unit cells of |z|^{2-n-2a} / n, the diagonal-cell
// factor multiplying |grad f|^2 h^{n+2-2a}.
double diagonal_factor(int dim, double alpha) {
  const int s = dim == 2 ? 200 : 40;
  double sum = 0.0;
  const double d = 2.0 / s;
  for (int i = 0; i < s; ++i) {
    const double x = -1.0 + (i + 0.5) * d;
    for (int j = 0; j < s; ++j) {
      const double y = -1.0 + (j + 0.5) * d;
      const int kmax = dim == 3 ? s : 1;
      for (int k = 0; k < kmax; ++k) {
        const double z = dim == 3 ? -1.0 + (k + 0.5) * d : 0.0;
        const double r2 = x * x + y * y + z * z;
        const double tri = (1 - std::abs(x)) * (1 - std::abs(y)) * (dim == 3 ? 1 - std::abs(z) : 1.0);
        sum += tri * std::pow(r2, 0.5 * (2.0 - dim - 2.0 * alpha));
      }
    }
  }
  return sum * std::pow(d, dim) / dim;
}

}  // namespace

NormReport v_alpha_norm(const VectorField& f, double alpha, const BallFamily& balls) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("v_alpha_norm: alpha must lie in (0, 1)");
  const PeriodicGrid& g = f.grid();
  if (!(g == balls.grid())) throw std::invalid_argument("v_alpha_norm: field and ball family grids differ");
  const int dim = g.dim();
  const int n = g.points_per_axis();
  const double h = g.spacing();
  const double cell2 = g.cell_volume() * g.cell_volume();
  const int nc = f.component_count();

  // |grad f|^2 for the diagonal-cell estimate.
  std::vector<double> grad2(g.point_count(), 0.0);
  for (const auto& c : f.components()) {
    const VectorField grad = gradient(c);
    for (const auto& gc : grad.components())
      for (std::size_t i = 0; i < grad2.size(); ++i) grad2[i] += gc[i] * gc[i];
  }
  const double diag_factor = diagonal_factor(dim, alpha) * std::pow(h, dim + 2.0 - 2.0 * alpha);

  std::map<int, Spectrum> kernels;
  NormReport rep;
  rep.family = "V";
  rep.param = alpha;
  rep.grid_n = n;
  rep.time_nodes = 0;
  rep.balls = balls.summary();
  rep.value = -1.0;

  for (std::size_t r = 0; r < balls.radius_count(); ++r) {
    const BallStencil& st = balls.stencil(r);
    int reach = 0;
    for (const auto& d : st.offsets)
      for (int a = 0; a < dim; ++a) reach = std::max(reach, std::abs(d[a]));
    // Pair offsets reach 2*reach per axis; circular convolution on M needs M > 4*reach.
    int m = 4;
    while (m <= 4 * reach) m *= 2;
    m = std::min(m, n);
    const PeriodicGrid box(dim, m * h, m);
    auto it = kernels.find(m);
    if (it == kernels.end()) it = kernels.emplace(m, kernel_spectrum(box, alpha)).first;
    const Spectrum& kernel = it->second;
    const double scale = std::pow(st.radius, -(dim - 2.0 * alpha - 2.0));

    for (std::size_t c = 0; c < balls.center_count(); ++c) {
      const auto& ctr = balls.centers()[c];
      const std::size_t center_flat = g.flatten({ctr[0], ctr[1], ctr[2]});
      // The center sits at local index m/2 on each axis.
      std::vector<double> w(box.point_count(), 0.0);
      std::vector<std::vector<double>> gv(static_cast<std::size_t>(nc), std::vector<double>(box.point_count(), 0.0));
      std::vector<std::size_t> local;
      local.reserve(st.offsets.size());
      double diag = 0.0;
      for (std::size_t k = 0; k < st.offsets.size(); ++k) {
        std::array<long, 3> li{0, 0, 0};
        std::array<long, 3> gi{0, 0, 0};
        for (int a = 0; a < dim; ++a) {
          li[a] = m / 2 + st.offsets[k][a];
          gi[a] = ctr[a] + st.offsets[k][a];
        }
        const std::size_t lf = box.flatten(li);
        const std::size_t gf = g.flatten(gi);
        w[lf] += st.weights[k];
        for (int q = 0; q < nc; ++q) gv[static_cast<std::size_t>(q)][lf] = f[q][gf] - f[q][center_flat];
        local.push_back(lf);
        diag += st.weights[k] * grad2[gf];
      }
      const ScalarField wf(box, w);
      const ScalarField a_conv = convolve(kernel, wf);
      double total = 0.0;
      std::vector<double> g2(box.point_count(), 0.0);
      for (int q = 0; q < nc; ++q)
        for (std::size_t lf : local) g2[lf] += gv[static_cast<std::size_t>(q)][lf] * gv[static_cast<std::size_t>(q)][lf];
      for (std::size_t lf : local) total += 2.0 * w[lf] * g2[lf] * a_conv[lf];
      for (int q = 0; q < nc; ++q) {
        std::vector<double> wg(box.point_count(), 0.0);
        for (std::size_t lf : local) wg[lf] = w[lf] * gv[static_cast<std::size_t>(q)][lf];
        const ScalarField b_conv = convolve(kernel, ScalarField(box, wg));
        for (std::size_t lf : local) total -= 2.0 * wg[lf] * b_conv[lf];
      }
      total = std::max(0.0, total * cell2);
      const double value = std::sqrt(total * scale);
      if (value > rep.value) {
        rep.value = value;
        rep.argmax_center = balls.center_point(c);
        rep.argmax_radius = st.radius;
        const double diag_mass = diag * diag_factor;
        rep.diagonal_fraction = total > 0.0 ? diag_mass / (total + diag_mass) : 0.0;
      }
    }
  }
  return rep;
}

NormReport v_alpha_norm(const ScalarField& f, double alpha, const BallFamily& balls) {
  return v_alpha_norm(as_vector(f), alpha, balls);
}

}  // namespace tentflow
