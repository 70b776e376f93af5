#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <string>

#include "bcp/equilibria.hpp"
#include "bcp/errors.hpp"
#include "bcp/geometry.hpp"
#include "bcp/shape.hpp"
#include "test_util.hpp"

using namespace bcp;

namespace {

ControlParams benchmark_two_agent() {
  return ControlParams::symmetric(0.5, 0.75, kPi / 3.0,
                                  {5.0 * kPi / 12.0, -kPi / 12.0});
}

ControlParams benchmark_five_agent() {
  return ControlParams::symmetric(
      0.5, 1.5, -kPi / 6.0,
      {-kPi / 4.0, -kPi / 4.0, -kPi / 4.0, -kPi / 4.0, -kPi / 4.0});
}

const EquilibriumSpec* find_type(const std::vector<ClassifiedEquilibrium>& v,
                                 TwoAgentType t) {
  for (const ClassifiedEquilibrium& c : v)
    if (c.type == t) return &c.spec;
  return nullptr;
}

}  // namespace

TEST_CASE("two-agent benchmark radius and geometry") {
  std::vector<ClassifiedEquilibrium> cls =
      classify_two_agent(benchmark_two_agent());
  const EquilibriumSpec* ccw = find_type(cls, TwoAgentType::Type1CCW);
  REQUIRE(ccw != nullptr);
  CHECK(std::fabs(ccw->rho_b - 0.9761) < 1e-4);
  CHECK(ccw->direction == 1);
  CHECK(ccw->kappa_b == doctest::Approx(kPi / 2.0));
  CHECK(angle_dist(ccw->alpha_star, kPi / 3.0) < 1e-12);
  CHECK(angle_dist(ccw->kappa[0], 3.0 * kPi / 4.0) < 1e-12);
  CHECK(angle_dist(ccw->kappa[1], kPi / 4.0) < 1e-12);
  CHECK(ccw->rho[0] == doctest::Approx(ccw->rho[1]).epsilon(1e-12));
  // rho = 2 rho_b sin(kappa) on the circle chord.
  CHECK(ccw->rho[0] ==
        doctest::Approx(2.0 * ccw->rho_b * std::sin(3.0 * kPi / 4.0)));
  CHECK(ccw->rate == doctest::Approx(1.0 / ccw->rho_b));

  // Beacon-frame separations are 2 kappa_i: {3pi/2, pi/2}.
  CHECK(std::fabs(ccw->spacing[0] - 3.0 * kPi / 2.0) < 1e-9);
  CHECK(std::fabs(ccw->spacing[1] - kPi / 2.0) < 1e-9);

  // The mirror CW twin exists with the same radius.
  const EquilibriumSpec* cw = find_type(cls, TwoAgentType::Type1CW);
  REQUIRE(cw != nullptr);
  CHECK(cw->direction == -1);
  CHECK(cw->rho_b == doctest::Approx(ccw->rho_b).epsilon(1e-12));
  // cos(alpha_minus) > 0 here, so no Type-2 equilibria.
  CHECK(find_type(cls, TwoAgentType::Type2CCW) == nullptr);
  CHECK(find_type(cls, TwoAgentType::Type2CW) == nullptr);
}

TEST_CASE("five-agent benchmark pentagon") {
  EquilibriumSet set = enumerate_equilibria(benchmark_five_agent());
  CHECK_FALSE(set.continuum);
  const EquilibriumSpec* pentagon = nullptr;
  for (const EquilibriumSpec& e : set.specs) {
    if (e.direction != -1) continue;
    bool uniform = true;
    for (int i = 0; i < e.n(); ++i)
      uniform = uniform && angle_dist(e.kappa[i], -kPi / 5.0) < 1e-9;
    if (uniform) {
      CHECK(pentagon == nullptr);  // deduplication leaves exactly one
      pentagon = &e;
    }
  }
  REQUIRE(pentagon != nullptr);
  CHECK(std::fabs(pentagon->rho_b - 0.9395) < 1e-4);
  for (int i = 0; i < 5; ++i) {
    // Uniform CW spacing: each successive agent sits -2pi/5 around the
    // beacon, stored as its [0, 2pi) representative.
    CHECK(std::fabs(pentagon->spacing[i] - (kTwoPi - 2.0 * kPi / 5.0)) <
          1e-9);
  }
  CHECK(pentagon->rate == doctest::Approx(-1.0 / pentagon->rho_b));
}

TEST_CASE("every enumerated spec is positive and near-zero residual") {
  std::mt19937_64 eng(21);
  int specs_seen = 0;
  for (int draw = 0; draw < 300; ++draw) {
    int n = 2 + static_cast<int>(eng() % 5);
    ControlParams p = testutil::random_symmetric(eng, n);
    EquilibriumSet set = enumerate_equilibria(p);
    for (const EquilibriumSpec& e : set.specs) {
      ++specs_seen;
      CHECK(e.rho_b > 0.0);
      for (double r : e.rho) CHECK(r > 0.0);
      CHECK(std::fabs(std::fabs(e.kappa_b) - kPi / 2.0) < 1e-12);
      CHECK(equilibrium_residual(e, p) < 1e-10);
    }
  }
  CHECK(specs_seen > 300);  // the draws do produce a healthy population
}

TEST_CASE("enumeration deduplicates and orders deterministically") {
  std::mt19937_64 eng(22);
  for (int draw = 0; draw < 50; ++draw) {
    int n = 2 + static_cast<int>(eng() % 4);
    ControlParams p = testutil::random_symmetric(eng, n);
    EquilibriumSet set = enumerate_equilibria(p);
    for (size_t a = 0; a < set.specs.size(); ++a)
      for (size_t b = a + 1; b < set.specs.size(); ++b) {
        const EquilibriumSpec& x = set.specs[a];
        const EquilibriumSpec& y = set.specs[b];
        if (x.direction != y.direction) continue;
        double gap = 0.0;
        for (int i = 0; i < n; ++i)
          gap = std::max(gap, angle_dist(x.kappa[i], y.kappa[i]));
        bool same_radius =
            std::fabs(x.rho_b - y.rho_b) <= 1e-9 * std::max(1.0, y.rho_b);
        CHECK((gap > 1e-9 || !same_radius));
      }
    EquilibriumSet again = enumerate_equilibria(p);
    REQUIRE(again.specs.size() == set.specs.size());
    for (size_t k = 0; k < set.specs.size(); ++k) {
      CHECK(again.specs[k].direction == set.specs[k].direction);
      CHECK(again.specs[k].winding == set.specs[k].winding);
      CHECK(again.specs[k].rho_b == set.specs[k].rho_b);
    }
  }
}

TEST_CASE("type identities hold across random draws") {
  // kappa_1 - kappa_2 = 2 alpha_minus and kappa_1 + kappa_2 = m pi hold for
  // every existing type, with m odd.
  std::mt19937_64 eng(23);
  int found = 0;
  for (int draw = 0; draw < 300; ++draw) {
    double ap = testutil::uniform(eng, -kPi, kPi);
    double am = testutil::uniform(eng, -kPi, kPi);
    ControlParams p = ControlParams::symmetric(
        testutil::uniform(eng, 0.15, 0.85), testutil::uniform(eng, 0.3, 2.5),
        testutil::uniform(eng, -kPi, kPi), {ap + am, ap - am});
    if (std::fabs(std::sin(2.0 * ap)) < 1e-6) continue;
    std::vector<ClassifiedEquilibrium> cls;
    try {
      cls = classify_two_agent(p);
    } catch (const Error&) {
      continue;
    }
    for (const ClassifiedEquilibrium& c : cls) {
      ++found;
      CHECK(angle_dist(wrap_angle(c.spec.kappa[0] - c.spec.kappa[1]),
                       wrap_angle(2.0 * am)) < 1e-10);
      double ksum = wrap_angle(c.spec.kappa[0] + c.spec.kappa[1]);
      CHECK(std::min(angle_dist(ksum, kPi), angle_dist(ksum, -kPi)) < 1e-10);
      CHECK(equilibrium_residual(c.spec, p) < 1e-10);
    }
  }
  CHECK(found > 200);
}

TEST_CASE("degenerate two-agent family is flagged") {
  // alpha_1 = alpha_2 = 0 puts sin(2 alpha_plus) at zero: the taxonomy
  // degenerates into a one-parameter family.
  ControlParams p = ControlParams::symmetric(0.5, 1.0, 0.3, {0.0, 0.0});
  try {
    classify_two_agent(p);
    FAIL("expected a degenerate-family error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateFamily);
  }
  EquilibriumSet set = enumerate_equilibria(p);
  CHECK(set.continuum);
}

TEST_CASE("missing types raise no-such-equilibrium") {
  // cos(alpha_minus) > 0 admits Type 1 only.
  ControlParams p = benchmark_two_agent();
  try {
    two_agent_spec(p, TwoAgentType::Type2CCW);
    FAIL("expected no-such-equilibrium");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSuchEquilibrium);
  }
}

TEST_CASE("type-2 equilibria appear when cos(alpha_minus) < 0") {
  // alpha_minus = 3pi/4, alpha_plus = pi/5.
  double ap = kPi / 5.0;
  double am = 3.0 * kPi / 4.0;
  ControlParams p =
      ControlParams::symmetric(0.5, 1.0, 0.4, {ap + am, ap - am});
  std::vector<ClassifiedEquilibrium> cls = classify_two_agent(p);
  CHECK(find_type(cls, TwoAgentType::Type1CCW) == nullptr);
  CHECK(find_type(cls, TwoAgentType::Type1CW) == nullptr);
  bool saw_type2 = false;
  for (const ClassifiedEquilibrium& c : cls) {
    saw_type2 = true;
    CHECK((c.type == TwoAgentType::Type2CCW ||
           c.type == TwoAgentType::Type2CW));
    CHECK(equilibrium_residual(c.spec, p) < 1e-10);
  }
  CHECK(saw_type2);
}

TEST_CASE("non-symmetric parameters are rejected") {
  ControlParams p = benchmark_two_agent();
  p.alpha_b[1] += 0.1;
  try {
    enumerate_equilibria(p);
    FAIL("expected an assumption violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AssumptionViolation);
  }
}

TEST_CASE("agent-count cap") {
  std::vector<double> alpha(13, 0.3);
  ControlParams p = ControlParams::symmetric(0.5, 1.0, 0.2, alpha);
  try {
    enumerate_equilibria(p);
    FAIL("expected an invalid-argument error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("shape realization matches the spec") {
  ControlParams p = benchmark_five_agent();
  EquilibriumSet set = enumerate_equilibria(p);
  for (const EquilibriumSpec& e : set.specs) {
    ShapeState s = shape_from_spec(e);
    for (int i = 0; i < e.n(); ++i) {
      CHECK(s.rho[i] == e.rho[i]);
      CHECK(s.rho_b[i] == e.rho_b);
      CHECK(s.kappa[i] == e.kappa[i]);
      CHECK(angle_dist(s.theta[(i + 1) % e.n()], wrap_angle(kPi - e.kappa[i])) <
            1e-12);
    }
    CHECK(closure_residual(s) < 1e-9);
  }
}
