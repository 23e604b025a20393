// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "test_support.hpp"
#include "tentflow/heat_ops.hpp"
#include "tentflow/ns_solver.hpp"

using namespace tentflow;
using namespace testing_support;

namespace {

SolverConfig small_config() {
  SolverConfig cfg;
  cfg.N = 32;
  cfg.t_final = 0.05;
  cfg.time_nodes = 96;
  cfg.picard_max = 30;
  cfg.picard_tol = 1e-8;
  return cfg;
}

// Divergence-free 2D field from a stream function of low modes.
VectorField small_flow(const PeriodicGrid& g, double amp, unsigned seed) {
  const ScalarField psi = random_trig(g, 2, seed);
  return amp * VectorField({partial_derivative(psi, 1), -1.0 * partial_derivative(psi, 0)});
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.eps0 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.picard_tol = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.dealias_fraction = 0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("prepare_data projects, mollifies and rescales") {
  const SolverConfig cfg = small_config();
  const PeriodicGrid g = cfg.grid();
  const ScalarField one = ScalarField::constant(g, 1.0);
  const PreparedData grad = prepare_data(gradient(random_trig(g, 3, 4u)), one, cfg);
  CHECK(grad.u0.max_abs() < 1e-12);

  SolverConfig near_id = cfg;
  near_id.mollify_k = 40;
  const VectorField u = small_flow(g, 1e-3, 6u);
  const PreparedData id = prepare_data(u, one, near_id);
  CHECK(max_abs_diff(id.u0, u) < 1e-6 * u.max_abs());
  CHECK(id.rescale_factor == 1.0);

  const ScalarField rho = ScalarField::sample(g, [](const Point& x) { return 1.0 + 0.1 * std::sin(2.0 * kPi * x[0]); });
  const PreparedData big = prepare_data(small_flow(g, 10.0, 6u), rho, cfg);
  CHECK(big.rescale_factor < 1.0);
  CHECK(big.u0_norm + big.rho_dev <= cfg.eps0 * (1.0 + 1e-9));
  CHECK(big.c_moll > 0.0);

  CHECK_THROWS_AS(prepare_data(u, ScalarField::constant(g, 0.0), cfg), std::invalid_argument);
  CHECK_THROWS_AS(prepare_data(u, ScalarField::constant(g, 1.8), cfg), std::invalid_argument);
}

TEST_CASE("density transport") {
  const SolverConfig cfg = small_config();
  const PeriodicGrid g(2, 1.0, 64);
  const TimeGrid tg = make_log_time_grid(1e-4, 0.1, 16);
  const ScalarField rho = ScalarField::sample(g, [](const Point& x) {
    return 1.0 + 0.05 * std::sin(2.0 * kPi * x[0]) * std::cos(2.0 * kPi * x[1]);
  });
  SUBCASE("no flow leaves the density unchanged") {
    const SpaceTimeField zero = SpaceTimeField::zeros(tg, g, 2);
    CHECK(max_abs_diff(transport_density(rho, zero, 0.0, tg.nodes().back()), rho) < 1e-14);
  }
  SUBCASE("uniform flow translates the density") {
    const VectorField c({ScalarField::constant(g, 0.3), ScalarField::constant(g, -0.2)});
    const SpaceTimeField flow(tg, std::vector<VectorField>(tg.size(), c));
    const double t_end = tg.nodes().back();
    const double dt = t_end - 1e-3;
    const ScalarField out = transport_density(rho, flow, 1e-3, t_end);
    // Exact translation rho(x - c dt) as a spectral shift.
    const MultiplierOp shift{[&](const Mode& m) { return std::exp(Complex(0.0, -(m.k[0] * 0.3 - m.k[1] * 0.2) * dt)); }, "shift"};
    CHECK(max_abs_diff(out, shift.apply(rho)) < 1e-3);
  }
  SUBCASE("maximum principle for a swirling flow") {
    const ScalarField psi = ScalarField::sample(g, [](const Point& x) { return std::sin(2.0 * kPi * x[0]) * std::sin(2.0 * kPi * x[1]); });
    const VectorField v = 0.5 * VectorField({partial_derivative(psi, 1), -1.0 * partial_derivative(psi, 0)});
    const SpaceTimeField flow(tg, std::vector<VectorField>(tg.size(), v));
    const ScalarField out = transport_density(rho, flow, 0.0, tg.nodes().back());
    const double dev0 = (rho - ScalarField::constant(g, 1.0)).max_abs();
    CHECK((out - ScalarField::constant(g, 1.0)).max_abs() <= dev0 + 1e-12);
  }
  CHECK_THROWS_AS(transport_density(rho, SpaceTimeField::zeros(tg, g, 2), 0.05, 0.01), std::invalid_argument);
  (void)cfg;
}

TEST_CASE("zero data is a fixed point") {
  const SolverConfig cfg = small_config();
  const PeriodicGrid g = cfg.grid();
  const ScalarField rho0 = ScalarField::sample(g, [](const Point& x) { return 1.0 + 0.05 * std::cos(2.0 * kPi * x[1]); });
  const SolveResult res = solve(VectorField::zeros(g, 2), rho0, cfg);
  CHECK(res.status == SolveStatus::converged);
  CHECK(res.state.iterate_index == 1);
  CHECK(res.state.u_traj.l2_norm() == 0.0);
  CHECK(max_abs_diff(res.state.rho, rho0) < 1e-14);
  CHECK(res.e_alpha.total == 0.0);
}

TEST_CASE("Picard step splits into u_L + v + w and w vanishes at unit density") {
  const SolverConfig cfg = small_config();
  const PeriodicGrid g = cfg.grid();
  const VectorField u0 = small_flow(g, 0.05, 12u);
  const SolverState s0 = initial_state(u0, ScalarField::constant(g, 1.0), cfg);
  const auto [s1, split] = picard_step(s0, u0, cfg);
  CHECK(split.w.l2_norm() == 0.0);
  CHECK(split.v.l2_norm() > 0.0);
  const SpaceTimeField sum = split.u_L + split.v + split.w;
  double err = 0.0;
  for (std::size_t m = 0; m < sum.size(); ++m) err = std::max(err, max_abs_diff(sum[m], s1.u_traj[m]));
  CHECK(err <= 1e-10 * u0.max_abs());
  for (std::size_t m = 0; m < sum.size(); ++m) CHECK(divergence(s1.u_traj[m]).max_abs() <= 1e-8 * (1.0 + u0.max_abs()));
}

TEST_CASE("variable density solve keeps the invariants") {
  SolverConfig cfg = small_config();
  cfg.picard_tol = 1e-7;
  const PeriodicGrid g = cfg.grid();
  const ScalarField rho0 = ScalarField::sample(g, [](const Point& x) { return 1.0 + 0.05 * std::sin(2.0 * kPi * (x[0] + x[1])); });
  const SolveResult res = solve(small_flow(g, 0.5, 3u), rho0, cfg);
  REQUIRE(res.status == SolveStatus::converged);
  const auto& diag = res.state.diagnostics;
  for (std::size_t i = 2; i < diag.size(); ++i) CHECK(diag[i].increment < diag[i - 1].increment);
  const auto& dev = diag.back().rho_dev;
  for (std::size_t m = 1; m < dev.size(); ++m) CHECK(dev[m] <= dev[m - 1] + 1e-12);
  CHECK(dev.front() <= 0.05 + 1e-12);
  // Mean momentum stays at its initial value (zero).
  for (const auto& slice : res.state.u_traj.slices()) {
    CHECK(std::abs(slice[0].mean()) < 1e-10);
    CHECK(std::abs(slice[1].mean()) < 1e-10);
  }
}

TEST_CASE("constant-density solve agrees with the reference solver") {
  SolverConfig cfg = small_config();
  const PeriodicGrid g = cfg.grid();
  const SolveResult res = solve(small_flow(g, 0.5, 8u), ScalarField::constant(g, 1.0), cfg);
  REQUIRE(res.status == SolveStatus::converged);
  const SpaceTimeField ref = reference_solve(res.data.u0, cfg);
  const std::size_t last = ref.size() - 1;
  const double rel = (res.state.u_traj[last] - ref[last]).l2_norm() / ref[last].l2_norm();
  CHECK(rel < 1e-3);
  CHECK(energy_check(ref, res.data.u0).pass);
  CHECK(energy_check(res.state.u_traj, res.data.u0).pass);
}

TEST_CASE("reference solver reproduces Taylor-Green decay") {
  SolverConfig cfg = small_config();
  const PeriodicGrid g = cfg.grid();
  const VectorField tg({ScalarField::sample(g, [](const Point& x) { return std::sin(2.0 * kPi * x[0]) * std::cos(2.0 * kPi * x[1]); }),
                        ScalarField::sample(g, [](const Point& x) { return -std::cos(2.0 * kPi * x[0]) * std::sin(2.0 * kPi * x[1]); })});
  const SpaceTimeField ref = reference_solve(tg, cfg);
  const double k2 = 8.0 * kPi * kPi;
  for (std::size_t m = 0; m < ref.size(); m += 19) {
    const double decay = std::exp(-k2 * ref.time_grid().node(m));
    CHECK(max_abs_diff(ref[m], decay * tg) < 1e-6);
  }
  CHECK(reference_solve(VectorField::zeros(g, 2), cfg).l2_norm() == 0.0);
}

TEST_CASE("energy check on a heat flow is an equality") {
  const SolverConfig cfg = small_config();
  const PeriodicGrid g = cfg.grid();
  const VectorField u0 = small_flow(g, 1.0, 2u);
  std::vector<VectorField> slices;
  const TimeGrid tg = cfg.time_grid();
  for (double t : tg.nodes()) slices.push_back(heat_semigroup(u0, t));
  const EnergyReport rep = energy_check(SpaceTimeField(tg, slices), u0);
  CHECK(rep.pass);
  CHECK(std::abs(rep.max_excess) < 1e-3);
  CHECK(energy_check(SpaceTimeField::zeros(tg, g, 2)).max_excess == 0.0);
}
