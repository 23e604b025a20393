// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "doctest.h"
#include "test_support.hpp"
#include "tentflow/balls.hpp"
#include "tentflow/heat_ops.hpp"
#include "tentflow/tent_norms.hpp"

using namespace tentflow;
using namespace testing_support;

namespace {

// Integral of fn over the disc B(c, r) on the torus by a fine midpoint rule.
double disc_integral(const Point& c, double r, const std::function<double(double, double)>& fn) {
  const int s = 400;
  const double d = 2.0 * r / s;
  double sum = 0.0;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      const double x = -r + (i + 0.5) * d;
      const double y = -r + (j + 0.5) * d;
      if (x * x + y * y <= r * r) sum += fn(c[0] + x, c[1] + y);
    }
  return sum * d * d;
}

// Composite Simpson rule on [a, b].
double simpson(double a, double b, int n, const std::function<double(double)>& fn) {
  const double h = (b - a) / n;
  double s = fn(a) + fn(b);
  for (int i = 1; i < n; ++i) s += fn(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// cos(2 pi (m0 x + m1 y)) on the unit torus.
struct Mode2 {
  int m0, m1;
  double k2() const { return 4.0 * kPi * kPi * (m0 * m0 + m1 * m1); }
  double phase(double x, double y) const { return 2.0 * kPi * (m0 * x + m1 * y); }
  ScalarField sample(const PeriodicGrid& g) const {
    return ScalarField::sample(g, [&](const Point& p) { return std::cos(phase(p[0], p[1])); });
  }
};

}  // namespace

TEST_CASE("ball families validate radii") {
  const PeriodicGrid g(2, 1.0, 32);
  const std::vector<std::array<int, 3>> c{{0, 0, 0}};
  CHECK_THROWS_AS(BallFamily(g, c, {0.25, 0.125}), std::invalid_argument);
  CHECK_THROWS_AS(BallFamily(g, c, {0.3, 0.125, 0.0625}), std::invalid_argument);
  CHECK_THROWS_AS(BallFamily(g, c, {0.125, 0.25, 0.0625}), std::invalid_argument);
  CHECK_THROWS_AS(BallFamily(g, c, {0.25, 0.125, 0.0}), std::invalid_argument);
  const BallFamily fam = BallFamily::standard(g);
  CHECK(fam.center_count() == 64);
  CHECK(fam.radius_count() == 4);
  CHECK(fam.radii().front() == doctest::Approx(0.25));
}

TEST_CASE("ball stencil volumes approach the exact ball volume") {
  const PeriodicGrid g2(2, 1.0, 64);
  for (double r : {0.25, 0.0625, 0.03125}) CHECK(make_ball_stencil(g2, r).volume == doctest::Approx(kPi * r * r).epsilon(5e-3));
  const PeriodicGrid g3(3, 1.0, 32);
  for (double r : {0.25, 0.125}) CHECK(make_ball_stencil(g3, r).volume == doctest::Approx(4.0 / 3.0 * kPi * r * r * r).epsilon(1e-2));
}

TEST_CASE("tent time grid covers every ball") {
  const PeriodicGrid g(2, 1.0, 32);
  const BallFamily fam = BallFamily::standard(g);
  const TimeGrid tg = tent_time_grid(fam);
  CHECK(tg.upper_edge() == doctest::Approx(0.0625));
  CHECK(tg.lower_edge() <= 1e-2 * g.spacing() * g.spacing());
  for (double r : fam.radii()) {
    const auto e = tg.edges();
    const bool hit = std::any_of(e.begin(), e.end(), [&](double x) { return std::abs(x / (r * r) - 1.0) < 1e-10; });
    CHECK(hit);
  }
  // Node counts round up to a whole number of cells per factor 4.
  const std::size_t n64 = tent_time_grid(fam, 64).size();
  CHECK(n64 >= 64);
  CHECK(n64 % 7 == 0);
}

TEST_CASE("U_alpha norm of a Fourier mode matches a continuum quadrature") {
  const PeriodicGrid g(2, 1.0, 64);
  const BallFamily fam = BallFamily::standard(g);
  const Mode2 md{2, 1};
  const ScalarField f = md.sample(g);
  for (double alpha : {-0.5, 0.0, 0.5}) {
    const NormReport rep = u_alpha_norm(f, alpha, fam);
    // |grad e^{t Delta} f|^2 = k^2 e^{-2 t k^2} sin^2(phase).
    double oracle = 0.0;
    for (double r : fam.radii()) {
      // t^{-a} dt = ds / (1 - a) with s = t^{1-a}.
      const double time = simpson(0.0, std::pow(r * r, 1.0 - alpha), 4000, [&](double s) {
        return md.k2() * std::exp(-2.0 * md.k2() * std::pow(s, 1.0 / (1.0 - alpha)));
      }) / (1.0 - alpha);
      for (std::size_t c = 0; c < fam.center_count(); ++c) {
        const auto cp = fam.center_point(c);
        const double space = disc_integral({cp[0], cp[1], 0.0}, r, [&](double x, double y) {
          const double s = std::sin(md.phase(x, y));
          return s * s;
        });
        oracle = std::max(oracle, std::sqrt(space * time * std::pow(r, 2.0 * alpha + 2.0 - 2.0)));
      }
    }
    CHECK(rep.value == doctest::Approx(oracle).epsilon(0.02));
    CHECK(rep.family == "U");
    CHECK(rep.grid_n == 64);
  }
}

TEST_CASE("BMO^-1 norm of a Fourier mode matches a continuum quadrature") {
  const PeriodicGrid g(2, 1.0, 64);
  const BallFamily fam = BallFamily::standard(g);
  const Mode2 md{1, 3};
  const NormReport rep = bmo_minus1_norm(md.sample(g), fam);
  double oracle = 0.0;
  for (double r : fam.radii()) {
    const double time = -std::expm1(-2.0 * md.k2() * r * r) / (2.0 * md.k2());
    for (std::size_t c = 0; c < fam.center_count(); ++c) {
      const auto cp = fam.center_point(c);
      const double space = disc_integral({cp[0], cp[1], 0.0}, r, [&](double x, double y) {
        const double v = std::cos(md.phase(x, y));
        return v * v;
      });
      oracle = std::max(oracle, std::sqrt(space * time / (r * r)));
    }
  }
  CHECK(rep.value == doctest::Approx(oracle).epsilon(0.02));
}

TEST_CASE("tent norms of a constant trajectory") {
  const PeriodicGrid g(2, 1.0, 32);
  const BallFamily fam = BallFamily::standard(g);
  const TimeGrid tg = tent_time_grid(fam);
  const double c = 1.5;
  const SpaceTimeField u(tg, std::vector<VectorField>(tg.size(), as_vector(ScalarField::constant(g, c))));
  const auto expected = [&](double e, double w, double p) {
    double best = 0.0;
    for (std::size_t r = 0; r < fam.radius_count(); ++r) {
      const double rad = fam.radii()[r];
      const double v = std::pow(c, p) * fam.stencil(r).volume * std::pow(rad * rad, w + 1.0) / (w + 1.0);
      best = std::max(best, std::pow(v * std::pow(rad, -e), 1.0 / p));
    }
    return best;
  };
  for (double beta : {-0.5, 0.0, 0.75}) {
    CHECK(tent_T_norm(u, beta, fam).value == doctest::Approx(expected(2.0 + 2.0 * beta - 4.0, beta, 2.0)).epsilon(1e-3));
    CHECK(tent_boldT_norm(u, beta, fam).value == doctest::Approx(expected(2.0 + 2.0 * beta - 2.0, beta, 2.0)).epsilon(1e-3));
  }
  CHECK(classic_tent_norm(u, 3.0, fam).value == doctest::Approx(expected(2.0, 0.0, 3.0)).epsilon(1e-3));
  const TentProfile prof = tent_profile(u, {TentFamily::T, 0.0, 2.0}, fam);
  CHECK(prof.values.size() == fam.radius_count());
  CHECK(prof.values[0].size() == fam.center_count());
}

TEST_CASE("tent weights reject out-of-range parameters") {
  const PeriodicGrid g(2, 1.0, 32);
  const BallFamily fam = BallFamily::standard(g);
  const ScalarField f = random_trig(g, 3, 1u);
  CHECK_THROWS_AS(u_alpha_norm(f, -1.0, fam), std::invalid_argument);
  CHECK_THROWS_AS(u_alpha_norm(f, 1.5, fam), std::invalid_argument);
  CHECK_THROWS_AS(v_alpha_norm(f, 1.0, fam), std::invalid_argument);
  CHECK_THROWS_AS(v_alpha_norm(f, 0.0, fam), std::invalid_argument);
  CHECK_THROWS_AS((TentWeight{TentFamily::ClassicT, 0.0, 0.5}.validate()), std::invalid_argument);
  const PeriodicGrid other(2, 1.0, 64);
  CHECK_THROWS_AS(u_alpha_norm(random_trig(other, 3, 1u), 0.5, fam), std::invalid_argument);
}

TEST_CASE("V_alpha matches a brute-force double sum") {
  const PeriodicGrid g(2, 1.0, 32);
  const BallFamily fam = BallFamily::standard(g);
  const ScalarField f = random_trig(g, 4, 17u);
  const double h = g.spacing();
  for (double alpha : {0.25, 0.75}) {
    double oracle = 0.0;
    for (std::size_t r = 0; r < fam.radius_count(); ++r) {
      const BallStencil& st = fam.stencil(r);
      for (std::size_t c = 0; c < fam.center_count(); ++c) {
        const auto& ctr = fam.centers()[c];
        double sum = 0.0;
        for (std::size_t i = 0; i < st.offsets.size(); ++i) {
          const double fi = f[g.flatten({ctr[0] + st.offsets[i][0], ctr[1] + st.offsets[i][1], 0})];
          for (std::size_t j = 0; j < st.offsets.size(); ++j) {
            if (i == j) continue;
            const double dx = (st.offsets[i][0] - st.offsets[j][0]) * h;
            const double dy = (st.offsets[i][1] - st.offsets[j][1]) * h;
            const double fj = f[g.flatten({ctr[0] + st.offsets[j][0], ctr[1] + st.offsets[j][1], 0})];
            sum += st.weights[i] * st.weights[j] * (fi - fj) * (fi - fj) * std::pow(dx * dx + dy * dy, -0.5 * (2.0 + 2.0 * alpha));
          }
        }
        sum *= h * h * h * h;
        oracle = std::max(oracle, std::sqrt(sum * std::pow(st.radius, 2.0 * alpha)));
      }
    }
    const NormReport rep = v_alpha_norm(f, alpha, fam);
    CHECK(rep.value == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(rep.diagonal_fraction >= 0.0);
    CHECK(rep.diagonal_fraction < 1.0);
  }
}

TEST_CASE("V_alpha is invariant under constant shifts") {
  const PeriodicGrid g(2, 1.0, 32);
  const BallFamily fam = BallFamily::standard(g);
  const ScalarField f = random_trig(g, 4, 5u);
  const double a = v_alpha_norm(f, 0.5, fam).value;
  const double b = v_alpha_norm(f + ScalarField::constant(g, 3.0), 0.5, fam).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-10));
}

TEST_CASE("Besov inf-inf norm of a mode has its closed-form maximizer") {
  const PeriodicGrid g(2, 1.0, 32);
  const Mode2 md{2, 2};
  const BesovReport rep = besov_heatflow_norm(md.sample(g), -1.0, BesovFlavor::inf_inf);
  // sup_t t^{1/2} e^{-t k^2} at t = 1 / (2 k^2).
  CHECK(rep.value == doctest::Approx(std::sqrt(1.0 / (2.0 * md.k2())) * std::exp(-0.5)).epsilon(1e-8));
  CHECK(rep.t_at_max == doctest::Approx(1.0 / (2.0 * md.k2())).epsilon(1e-3));
  CHECK_FALSE(rep.at_endpoint);
}

TEST_CASE("Besov norms match a dense scan over t") {
  const PeriodicGrid g(2, 1.0, 32);
  const Mode2 a{1, 0}, b{0, 3};
  const ScalarField f = a.sample(g) + 0.7 * b.sample(g);
  const double t_lo = 1e-2 * g.spacing() * g.spacing();
  const auto scan = [&](const std::function<double(double)>& fn) {
    double best = 0.0;
    const int n = 200000;
    for (int i = 0; i <= n; ++i) best = std::max(best, fn(t_lo * std::pow(1.0 / t_lo, static_cast<double>(i) / n)));
    return best;
  };
  // Both modes peak at the origin.
  const double inf_oracle = scan([&](double t) { return std::sqrt(t) * (std::exp(-t * a.k2()) + 0.7 * std::exp(-t * b.k2())); });
  CHECK(besov_heatflow_norm(f, -1.0, BesovFlavor::inf_inf).value == doctest::Approx(inf_oracle).epsilon(1e-6));
  // L^2 norm squared is (e^{-2 t k_a^2} + 0.49 e^{-2 t k_b^2}) / 2; s = 0 in 2D puts the sup at t_lo.
  const double two_oracle = scan([&](double t) { return std::sqrt(0.5 * (std::exp(-2.0 * t * a.k2()) + 0.49 * std::exp(-2.0 * t * b.k2()))); });
  const BesovReport two = besov_heatflow_norm(f, 0.0, BesovFlavor::two_inf);
  CHECK(two.value == doctest::Approx(two_oracle).epsilon(1e-9));
  CHECK(two.at_endpoint);
  CHECK_THROWS_AS(besov_heatflow_norm(f, 0.5, BesovFlavor::two_inf), std::invalid_argument);
}

TEST_CASE("Sobolev norm of a mode") {
  const PeriodicGrid g(2, 1.0, 32);
  const Mode2 md{3, 1};
  const ScalarField f = md.sample(g);
  CHECK(sobolev_norm(f, 0.0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(sobolev_norm(f, -0.5) == doctest::Approx(std::pow(md.k2(), -0.25) * std::sqrt(0.5)));
  CHECK(sobolev_norm(f + ScalarField::constant(g, 2.0), 1.0) == doctest::Approx(std::sqrt(md.k2() * 0.5)));
}

TEST_CASE("E_alpha of a heat trajectory has matching time and space parts") {
  const PeriodicGrid g(2, 1.0, 32);
  const BallFamily fam = BallFamily::standard(g);
  const TimeGrid tg = tent_time_grid(fam);
  const ScalarField f = random_trig(g, 3, 8u);
  std::vector<VectorField> slices;
  for (double t : tg.nodes()) slices.push_back(as_vector(heat_semigroup(f, t)));
  const SpaceTimeField u(tg, slices);
  const EAlphaReport e = e_alpha_norm(u, 0.5, fam);
  CHECK(e.dt_norm == doctest::Approx(e.lap_norm).epsilon(0.02));
  CHECK_FALSE(e.dt_underresolved);
  CHECK(e.total > 0.0);
  CHECK(e.total >= e.grad_norm);
  CHECK(e.besov_sup > 0.0);
}
