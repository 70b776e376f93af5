#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bcp/equilibria.hpp"
#include "bcp/errors.hpp"
#include "bcp/frenet.hpp"
#include "bcp/geometry.hpp"
#include "bcp/shape.hpp"
#include "bcp/sim.hpp"
#include "test_util.hpp"

using namespace bcp;

TEST_CASE("extracted shapes satisfy the closure constraints") {
  std::mt19937_64 eng(11);
  for (int draw = 0; draw < 200; ++draw) {
    int n = 2 + static_cast<int>(eng() % 5);
    WorldState w = testutil::random_world(eng, n);
    CHECK(closure_residual(extract_shape(w)) < 1e-10);
  }
}

TEST_CASE("closure residual flags corrupted shapes") {
  std::mt19937_64 eng(12);
  WorldState w = testutil::random_world(eng, 3);
  ShapeState s = extract_shape(w);
  s.rho_b[0] *= 1.5;
  CHECK(closure_residual(s) > 1e-3);
}

TEST_CASE("two-agent extraction lands on the reduced manifold") {
  // With only two agents the neighbor ahead and behind coincide, so
  // theta_i == kappa_i and both side lengths agree; the dynamics keep it so.
  std::mt19937_64 eng(13);
  for (int draw = 0; draw < 100; ++draw) {
    WorldState w = testutil::random_world(eng, 2);
    ControlParams p = testutil::random_symmetric(eng, 2);
    ShapeState s = extract_shape(w);
    CHECK(s.rho[0] == doctest::Approx(s.rho[1]).epsilon(1e-14));
    CHECK(angle_dist(s.theta[0], s.kappa[0]) < 1e-14);
    CHECK(angle_dist(s.theta[1], s.kappa[1]) < 1e-14);
    ShapeRates r = shape_derivative(s, p);
    CHECK(std::fabs(r.theta[0] - r.kappa[0]) < 1e-12);
    CHECK(std::fabs(r.theta[1] - r.kappa[1]) < 1e-12);
    CHECK(std::fabs(r.rho[0] - r.rho[1]) < 1e-12);
  }
}

TEST_CASE("reconstruction inverts extraction") {
  std::mt19937_64 eng(14);
  for (int draw = 0; draw < 100; ++draw) {
    int n = 2 + static_cast<int>(eng() % 5);
    WorldState w = testutil::random_world(eng, n);
    ShapeState s = extract_shape(w);
    double psi1 = vec_angle(w.agents[0].position - w.beacon);
    WorldState rebuilt = reconstruct_world(s, w.beacon, psi1);
    for (int i = 0; i < n; ++i) {
      CHECK(norm(rebuilt.agents[i].position - w.agents[i].position) < 1e-9);
      CHECK(angle_dist(rebuilt.agents[i].heading, w.agents[i].heading) <
            1e-9);
    }
  }
}

TEST_CASE("shape round-trip preserves the shape variables") {
  std::mt19937_64 eng(15);
  for (int draw = 0; draw < 100; ++draw) {
    int n = 2 + static_cast<int>(eng() % 5);
    ShapeState s = extract_shape(testutil::random_world(eng, n));
    ShapeState back = extract_shape(reconstruct_world(s, {0.3, -0.7}, 0.4));
    for (int i = 0; i < n; ++i) {
      CHECK(std::fabs(back.rho[i] - s.rho[i]) < 1e-9);
      CHECK(std::fabs(back.rho_b[i] - s.rho_b[i]) < 1e-9);
      CHECK(angle_dist(back.kappa[i], s.kappa[i]) < 1e-9);
      CHECK(angle_dist(back.theta[i], s.theta[i]) < 1e-9);
      CHECK(angle_dist(back.kappa_b[i], s.kappa_b[i]) < 1e-9);
    }
  }
}

TEST_CASE("reconstruction rejects inconsistent shapes") {
  std::mt19937_64 eng(16);
  ShapeState s = extract_shape(testutil::random_world(eng, 4));
  s.rho_b[2] *= 1.3;
  try {
    reconstruct_world(s, {0.0, 0.0}, 0.0);
    FAIL("expected an inconsistent-shape error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentShape);
  }
}

TEST_CASE("shape dynamics require symmetric gains") {
  std::mt19937_64 eng(17);
  ShapeState s = extract_shape(testutil::random_world(eng, 3));
  ControlParams p = testutil::random_symmetric(eng, 3);
  p.mu_b[1] = p.mu[1] * 2.0;
  try {
    shape_derivative(s, p);
    FAIL("expected an assumption violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AssumptionViolation);
  }
}

TEST_CASE("closure constraints persist along shape integration") {
  std::mt19937_64 eng(18);
  ShapeState init = extract_shape(testutil::random_world(eng, 3));
  ControlParams p = ControlParams::symmetric(0.5, 1.0, 0.5, {0.4, 0.4, 0.4});
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.representation = Representation::Shape;
  cfg.record_every = 50;
  Trajectory traj = integrate_shape(init, p, cfg);
  REQUIRE_FALSE(traj.aborted);
  double worst = 0.0;
  for (const ShapeState& s : traj.shape)
    worst = std::max(worst, closure_residual(s));
  CHECK(worst < 1e-7);
}

TEST_CASE("circling specs are fixed points of the shape field") {
  ControlParams p = ControlParams::symmetric(
      0.5, 0.75, kPi / 3.0, {5.0 * kPi / 12.0, -kPi / 12.0});
  EquilibriumSet set = enumerate_equilibria(p);
  REQUIRE_FALSE(set.specs.empty());
  for (const EquilibriumSpec& spec : set.specs) {
    ShapeState s = shape_from_spec(spec);
    ShapeRates r = shape_derivative(s, p);
    double worst = 0.0;
    for (int i = 0; i < spec.n(); ++i) {
      worst = std::max(worst, std::fabs(r.rho[i]));
      worst = std::max(worst, std::fabs(r.kappa[i]));
      worst = std::max(worst, std::fabs(r.theta[i]));
      worst = std::max(worst, std::fabs(r.rho_b[i]));
      worst = std::max(worst, std::fabs(r.kappa_b[i]));
    }
    CHECK(worst < 1e-12);
  }
}
