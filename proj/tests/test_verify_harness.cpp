// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "tentflow/verify_harness.hpp"

using namespace tentflow;
using namespace testing_support;

namespace {

Ensemble small(EnsembleKind kind, int components, int size = 2) {
  Ensemble e;
  e.kind = kind;
  e.components = components;
  e.size = size;
  return e;
}

}  // namespace

TEST_CASE("ensembles are deterministic and resolution independent") {
  const PeriodicGrid g64(2, 1.0, 64);
  const PeriodicGrid g128(2, 1.0, 128);
  for (EnsembleKind kind : {EnsembleKind::band_limited_random, EnsembleKind::localized_bumps, EnsembleKind::plane_wave_mix,
                            EnsembleKind::slobodeckij_rough}) {
    CAPTURE(to_string(kind));
    const Ensemble e = small(kind, 2, 4);
    const VectorField a = e.sample(g64, 3);
    CHECK(max_abs_diff(a, e.sample(g64, 3)) == 0.0);
    CHECK(max_abs_diff(a, e.sample(g64, 2)) > 0.0);
    CHECK(max_abs_diff(a[0], a[1]) > 0.0);
    Ensemble other = e;
    other.seed = 8;
    CHECK(max_abs_diff(a, other.sample(g64, 3)) > 0.0);
    CHECK(std::abs(a[0].mean()) < 1e-12 * (1.0 + a[0].max_abs()));
    // Same function at the shared points of the finer grid.
    const VectorField b = e.sample(g128, 3);
    double err = 0.0;
    for (std::size_t i = 0; i < g64.point_count(); ++i) {
      const auto idx = g64.unflatten(i);
      err = std::max(err, std::abs(a[0][i] - b[0][g128.flatten({2 * idx[0], 2 * idx[1], 0})]));
    }
    CHECK(err < 1e-10 * (1.0 + a[0].max_abs()));
    CHECK(ensemble_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(ensemble_kind_from_string("gaussian"), std::invalid_argument);
  CHECK_THROWS_AS(small(EnsembleKind::slobodeckij_rough, 1).sample(PeriodicGrid(2, 1.0, 32), 0), std::invalid_argument);
  CHECK_THROWS_AS(small(EnsembleKind::band_limited_random, 1).sample(g64, 2), std::out_of_range);
  Ensemble bad = small(EnsembleKind::band_limited_random, 4);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("skip rule, C_emp and the verdict rule") {
  CHECK(make_ratio(0, 1.0, 0.0, 1.0).skipped);
  CHECK(make_ratio(0, 1.0, 1e-13, 1.0).skipped);
  CHECK(make_ratio(0, 1.0, -1.0, 1.0).skipped);
  CHECK_FALSE(make_ratio(0, 1e-20, 1e-11, 1.0).skipped);
  const std::vector<SampleRatio> all{make_ratio(0, 1.0, 2.0, 1.0), make_ratio(1, 3.0, 2.0, 1.0), make_ratio(2, 5.0, 0.0, 1.0)};
  CHECK(c_emp_of(all) == doctest::Approx(1.5));
  // A subset never raises the constant.
  for (std::size_t k = 0; k < all.size(); ++k) {
    std::vector<SampleRatio> sub = all;
    sub.erase(sub.begin() + static_cast<long>(k));
    CHECK(c_emp_of(sub) <= c_emp_of(all));
  }
  CHECK(c_emp_of(std::vector<SampleRatio>{}) == 0.0);
  CHECK(verdict_of(1.0, 1.2) == Verdict::bounded_stable);
  CHECK(verdict_of(1.0, 0.8) == Verdict::bounded_stable);
  CHECK(verdict_of(1.0, 1.3) == Verdict::unstable);
  CHECK(verdict_of(1.0, 0.7) == Verdict::unstable);
  CHECK(verdict_of(0.0, 0.0) == Verdict::bounded_stable);
  CHECK(verdict_of(0.0, 1.0) == Verdict::unstable);
  CHECK(to_string(Verdict::bounded_stable) == "BOUNDED_STABLE");
  CHECK(to_string(Verdict::unstable) == "UNSTABLE");
}

TEST_CASE("campaign hypotheses are enforced") {
  const CampaignGrid cg;
  const Ensemble one = small(EnsembleKind::band_limited_random, 1);
  const Ensemble two = small(EnsembleKind::band_limited_random, 2);
  CHECK_THROWS_AS(check_maxreg_bound(one, 1.0, cg), std::invalid_argument);
  CHECK_THROWS_AS(check_leray_tent(two, 2.0, cg), std::invalid_argument);
  CHECK_THROWS_AS(check_leray_tent(one, 0.5, cg), std::invalid_argument);
  CHECK_THROWS_AS(check_gradient_and_product(one, 0.5, cg), std::invalid_argument);
  CHECK_THROWS_AS(check_bilinear(one, cg), std::invalid_argument);
  CHECK_THROWS_AS(check_lemma_timederiv(one, 1.0, cg), std::invalid_argument);
  CHECK_THROWS_AS(check_mollification(one, 0.5, cg, -1), std::invalid_argument);
  CampaignGrid coarse;
  coarse.n = 32;
  CHECK_THROWS_AS(check_lemma_timederiv(one, 0.5, coarse), std::invalid_argument);
  coarse.n = 96;
  CHECK_THROWS_AS(check_lemma_timederiv(one, 0.5, coarse), std::invalid_argument);
}

TEST_CASE("a small campaign runs at n and 2n") {
  const InequalityReport r = check_lemma_timederiv(small(EnsembleKind::localized_bumps, 1), 0.5, CampaignGrid{});
  CHECK(r.id == "lemma_timederiv");
  REQUIRE(r.runs.size() == 2);
  CHECK(r.runs[0].n == 64);
  CHECK(r.runs[1].n == 128);
  CHECK(r.runs[0].samples.size() == 2);
  CHECK(r.c_emp == r.runs[1].c_emp);
  CHECK(r.c_emp > 0.0);
  CHECK(r.verdict == verdict_of(r.runs[0].c_emp, r.runs[1].c_emp));
  REQUIRE(r.params.size() == 1);
  CHECK(r.params[0].first == "alpha");
}

TEST_CASE("mollification of a band-limited field is near the identity") {
  Ensemble e = small(EnsembleKind::band_limited_random, 1, 1);
  const InequalityReport r = check_mollification(e, 0.5, CampaignGrid{}, 20);
  CHECK(r.c_emp > 0.99);
  CHECK(r.c_emp <= 1.0 + 1e-9);
}

TEST_CASE("scaling report and dilation") {
  const PeriodicGrid g(2, 1.0, 64);
  const ScalarField f = ScalarField::sample(g, [](const Point& x) {
    const double r2 = (x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5);
    return std::exp(-r2 / (2.0 / 256.0));
  });
  CHECK(max_abs_diff(dilate(f, 1.0), f) == 0.0);
  // Dilation by 1/2 then 2 restores f on the central block |x - c| < L/4.
  const ScalarField round = dilate(dilate(f, 0.5), 2.0);
  double err = 0.0;
  for (std::size_t i = 0; i < g.point_count(); ++i) {
    const auto idx = g.unflatten(i);
    if (std::abs(idx[0] - 32) < 16 && std::abs(idx[1] - 32) < 16) err = std::max(err, std::abs(round[i] - f[i]));
  }
  CHECK(err < 1e-10);
  CHECK_THROWS_AS(dilate(f, 3.0), std::invalid_argument);
  const double lambdas[] = {1.0};
  const ScalingReport rep = check_scaling(f, 0.5, lambdas);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].deviation == 0.0);
  CHECK(rep.max_deviation == 0.0);
}

TEST_CASE("off-diagonal geometry") {
  const PeriodicGrid g(2, 1.0, 256);
  const ScalarField f = random_trig(g, 6, 3u);
  OffDiagonalGeometry geom;
  CHECK_THROWS_AS(measure_offdiagonal(f, 5, 1e-3, geom), std::invalid_argument);
  CHECK_THROWS_AS(measure_offdiagonal(f, 2, 0.0, geom), std::invalid_argument);
  const OffDiagonalMeasurement m = measure_offdiagonal(f, 3, 1e-3, geom);
  CHECK(m.lhs >= 0.0);
  CHECK(m.f_mass > 0.0);
  CHECK(m.x == doctest::Approx(std::pow(8.0 / 64.0, 2.0) / 1e-3));
  // f supported away from the annulus gives no mass and a zero ratio.
  const OffDiagonalMeasurement z = measure_offdiagonal(ScalarField::zeros(g), 3, 1e-3, geom);
  CHECK(z.ratio() == 0.0);
}
