#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "bcp/equilibria.hpp"
#include "bcp/errors.hpp"
#include "bcp/geometry.hpp"
#include "bcp/stability.hpp"
#include "test_util.hpp"

using namespace bcp;

namespace {

ControlParams benchmark_two_agent() {
  return ControlParams::symmetric(0.5, 0.75, kPi / 3.0,
                                  {5.0 * kPi / 12.0, -kPi / 12.0});
}

// Independent expansion of the factored polynomial, as a cross-check of the
// production convolution.
std::array<double, 8> expand_factors(double lambda, double delta, double psi,
                                     double c0) {
  auto mul = [](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  };
  std::vector<double> quad_structural{delta * delta, 0.0, 1.0};
  std::vector<double> quad{lambda * delta * delta, lambda * psi, 1.0};
  std::vector<double> cubic{c0, delta * delta, lambda * psi, 1.0};
  std::vector<double> full = mul(mul(quad_structural, quad), cubic);
  std::array<double, 8> out{};
  for (size_t k = 0; k < 8; ++k) out[k] = full[k];
  return out;
}

// Existence-filtered random parameter draw admitting the requested type.
bool draw_for_type(std::mt19937_64& eng, TwoAgentType type, ControlParams* p,
                   double margin = 0.0) {
  for (int attempt = 0; attempt < 400; ++attempt) {
    double lambda = testutil::uniform(eng, 0.15, 0.85);
    double mu = testutil::uniform(eng, 0.3, 2.5);
    double alpha0 = testutil::uniform(eng, -kPi, kPi);
    bool type1 =
        type == TwoAgentType::Type1CCW || type == TwoAgentType::Type1CW;
    double am = testutil::uniform(eng, -1.35, 1.35) + (type1 ? 0.0 : kPi);
    double ap = testutil::uniform(eng, -kPi, kPi);
    if (std::fabs(std::sin(2.0 * ap)) < 1e-4) continue;
    if (margin > 0.0 && (std::fabs(std::sin(alpha0)) < margin ||
                         std::fabs(std::sin(ap)) < margin))
      continue;
    ControlParams cand =
        ControlParams::symmetric(lambda, mu, alpha0, {ap + am, ap - am});
    try {
      two_agent_spec(cand, type);
    } catch (const Error&) {
      continue;
    }
    *p = cand;
    return true;
  }
  return false;
}

constexpr TwoAgentType kAllTypes[] = {
    TwoAgentType::Type1CCW, TwoAgentType::Type1CW, TwoAgentType::Type2CCW,
    TwoAgentType::Type2CW};

}  // namespace

TEST_CASE("benchmark polynomial coefficients") {
  ControlParams p = benchmark_two_agent();
  CharPoly poly = char_poly_two_agent(p, TwoAgentType::Type1CCW);
  double expected = 0.75 * (0.5 + std::sqrt(3.0) / 2.0);
  CHECK(poly.delta == doctest::Approx(expected).epsilon(1e-12));
  CHECK(poly.psi == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::fabs(poly.delta - 1.02452) < 1e-5);
  CHECK(poly.c0 ==
        doctest::Approx(0.5 * 0.75 * 0.5 * expected * expected)
            .epsilon(1e-12));
  // The structural pair sits at +-j delta = +-j / rho_b.
  ClassifiedEquilibrium c = two_agent_spec(p, TwoAgentType::Type1CCW);
  CHECK(poly.delta == doctest::Approx(1.0 / c.spec.rho_b).epsilon(1e-12));

  std::array<double, 8> expanded =
      expand_factors(poly.lambda, poly.delta, poly.psi, poly.c0);
  for (int k = 0; k < 8; ++k)
    CHECK(poly.coeffs[k] == doctest::Approx(expanded[k]).epsilon(1e-12));
}

TEST_CASE("closed-form roots annihilate the polynomial") {
  std::mt19937_64 eng(31);
  for (TwoAgentType type : kAllTypes) {
    for (int draw = 0; draw < 25; ++draw) {
      ControlParams p;
      if (!draw_for_type(eng, type, &p)) continue;
      CharPoly poly = char_poly_two_agent(p, type);
      std::vector<std::complex<double>> roots = poly.roots();
      REQUIRE(roots.size() == 7);
      double scale = 0.0;
      for (double c : poly.coeffs) scale = std::max(scale, std::fabs(c));
      bool plus = false, minus = false;
      for (const auto& r : roots) {
        CHECK(poly.eval_abs(r) < 1e-8 * std::max(1.0, scale));
        if (std::abs(r - std::complex<double>(0.0, poly.delta)) < 1e-12)
          plus = true;
        if (std::abs(r - std::complex<double>(0.0, -poly.delta)) < 1e-12)
          minus = true;
      }
      CHECK(plus);
      CHECK(minus);
    }
  }
}

TEST_CASE("polynomial roots match the numeric spectrum per type") {
  std::mt19937_64 eng(32);
  for (TwoAgentType type : kAllTypes) {
    int done = 0;
    for (int draw = 0; draw < 40 && done < 25; ++draw) {
      ControlParams p;
      if (!draw_for_type(eng, type, &p)) continue;
      ++done;
      ClassifiedEquilibrium c = two_agent_spec(p, type);
      CharPoly poly = char_poly_two_agent(p, type);
      NumericEigs eig = numeric_eigenvalues(c.spec, p);
      REQUIRE(eig.eigenvalues.size() == 7);
      CHECK(max_pair_gap(poly.roots(), eig.eigenvalues) < 1e-5);

      // The flagged structural pair lies within 1e-6 of +-j delta.
      int flagged = 0;
      for (size_t k = 0; k < eig.eigenvalues.size(); ++k) {
        if (!eig.structural[k]) continue;
        ++flagged;
        std::complex<double> target(
            0.0, std::copysign(poly.delta, eig.eigenvalues[k].imag()));
        CHECK(std::abs(eig.eigenvalues[k] - target) < 1e-6);
      }
      CHECK(flagged == 2);
    }
    CHECK(done >= 15);
  }
}

TEST_CASE("sign conditions decide stability") {
  ControlParams p = benchmark_two_agent();
  RouthResult good = routh_classify(p, TwoAgentType::Type1CCW);
  CHECK(good.classification == Classification::Stable);
  REQUIRE(good.conditions.size() == 4);
  for (const SignCondition& c : good.conditions) CHECK(c.satisfied);

  RouthResult cw = routh_classify(p, TwoAgentType::Type1CW);
  CHECK(cw.classification == Classification::Unstable);

  // Flipping the beacon offset sign destabilizes the CCW branch.
  ControlParams flipped = ControlParams::symmetric(
      0.5, 0.75, -kPi / 3.0, {5.0 * kPi / 12.0, -kPi / 12.0});
  CHECK(routh_classify(flipped, TwoAgentType::Type1CCW).classification ==
        Classification::Unstable);
}

TEST_CASE("analytic and numeric classifications agree away from margins") {
  std::mt19937_64 eng(33);
  int checked = 0;
  for (TwoAgentType type : kAllTypes) {
    for (int draw = 0; draw < 30; ++draw) {
      ControlParams p;
      if (!draw_for_type(eng, type, &p, 1e-3)) continue;
      ClassifiedEquilibrium c = two_agent_spec(p, type);
      NumericEigs eig = numeric_eigenvalues(c.spec, p);
      if (eig.classification == Classification::Marginal) continue;
      RouthResult routh = routh_classify(p, type);
      CHECK(routh.classification == eig.classification);
      ++checked;
    }
  }
  CHECK(checked > 60);
}

TEST_CASE("five-agent pentagon spectrum") {
  ControlParams p = ControlParams::symmetric(
      0.5, 1.5, -kPi / 6.0,
      {-kPi / 4.0, -kPi / 4.0, -kPi / 4.0, -kPi / 4.0, -kPi / 4.0});
  EquilibriumSet set = enumerate_equilibria(p);
  const EquilibriumSpec* pentagon = nullptr;
  for (const EquilibriumSpec& e : set.specs) {
    bool uniform = e.direction == -1;
    for (int i = 0; uniform && i < e.n(); ++i)
      uniform = angle_dist(e.kappa[i], -kPi / 5.0) < 1e-9;
    if (uniform) pentagon = &e;
  }
  REQUIRE(pentagon != nullptr);
  NumericEigs eig = numeric_eigenvalues(*pentagon, p);
  REQUIRE(eig.eigenvalues.size() == 25);
  int structural = 0;
  for (size_t k = 0; k < eig.eigenvalues.size(); ++k) {
    if (eig.structural[k]) {
      ++structural;
    } else {
      CHECK(eig.eigenvalues[k].real() < -0.1);
    }
  }
  // 2n + 1 symmetry modes: n rigid-rotation pairs plus one constraint mode.
  CHECK(structural == 11);
  CHECK(eig.classification == Classification::Stable);
  CHECK(eig.max_residual < kEigResidualTol);

  StabilityReport report = stability_report(*pentagon, p);
  CHECK_FALSE(report.has_analytic);
  CHECK(report.classification == Classification::Stable);
}

TEST_CASE("stability report stitches both layers for two agents") {
  ControlParams p = benchmark_two_agent();
  ClassifiedEquilibrium c = two_agent_spec(p, TwoAgentType::Type1CCW);
  StabilityReport r = stability_report(c.spec, p);
  REQUIRE(r.has_analytic);
  CHECK(r.type == TwoAgentType::Type1CCW);
  CHECK(r.agreement);
  CHECK(r.max_root_gap < 1e-5);
  CHECK(r.classification == Classification::Stable);
  CHECK(r.numeric.classification == Classification::Stable);
  CHECK(r.routh.classification == Classification::Stable);
}

TEST_CASE("pair gap measures the worst match") {
  std::vector<std::complex<double>> a{{1.0, 1.0}, {2.0, 0.0}};
  std::vector<std::complex<double>> b{{2.0, 0.0}, {1.0, 1.0}};
  CHECK(max_pair_gap(a, b) == doctest::Approx(0.0));
  std::vector<std::complex<double>> c{{0.0, 0.0}, {3.0, 0.0}};
  std::vector<std::complex<double>> d{{0.0, 0.0}, {4.0, 0.0}};
  CHECK(max_pair_gap(c, d) == doctest::Approx(1.0));
}

TEST_CASE("missing type is rejected by the analytic layer") {
  ControlParams p = benchmark_two_agent();
  try {
    char_poly_two_agent(p, TwoAgentType::Type2CW);
    FAIL("expected no-such-equilibrium");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSuchEquilibrium);
  }
}
