#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "bcp/equilibria.hpp"

namespace bcp {

// Real parts with magnitude below this are treated as neutral (structural or
// marginal) by the numeric classification.
inline constexpr double kStabEps = 1e-7;
// Central-difference step for the numeric Jacobian.
inline constexpr double kFdStep = 1e-6;
// Eigenpair residual ||Av - lambda v|| above this raises IllConditioned.
inline constexpr double kEigResidualTol = 1e-6;

enum class Classification { Stable, Unstable, Marginal };
const char* to_string(Classification c);

// Degree-7 characteristic polynomial of the two-agent reduced dynamics
// (state kappa_1, kappa_2, rho, kappa_b1, kappa_b2, rho_b1, rho_b2)
// linearized at an equilibrium, in factored form
//   (x^2 + delta^2)(x^2 + lambda*psi*x + lambda*delta^2)
//   (x^3 + lambda*psi*x^2 + delta^2*x + c0)
// where delta = 1/rho_b of the equilibrium (the structural pair sits at
// +-j*delta), psi is the effective damping coefficient and c0 the cubic
// constant. With direction s = sin(kappa_b) and type sign m (+s Type 1,
// -s Type 2):
//   delta = mu*(cos(alpha0) + ((1-lambda)/lambda)*s*m*cos(alpha_plus))
//   psi   = mu*(s*sin(alpha0) + ((1-lambda)/lambda)*m*sin(alpha_plus))
//   c0    = (1-lambda)*mu*m*sin(alpha_plus)*delta^2.
struct CharPoly {
  double lambda = 0.0;
  double delta = 0.0;
  double psi = 0.0;
  double c0 = 0.0;
  std::array<double, 8> coeffs{};  // expanded, coeffs[k]*x^k, coeffs[7] = 1

  std::vector<std::complex<double>> roots() const;  // all 7, closed form
  double eval_abs(std::complex<double> x) const;    // |P(x)|
};

// Requires n == 2, symmetric params, and that the type exists
// (NoSuchEquilibrium otherwise).
CharPoly char_poly_two_agent(const ControlParams& p, TwoAgentType type);

struct SignCondition {
  std::string name;
  double value = 0.0;
  bool satisfied = false;
};

struct RouthResult {
  Classification classification = Classification::Marginal;
  std::vector<SignCondition> conditions;
};

// Hurwitz classification of the non-structural factors via their sign
// conditions; stable iff s*sin(alpha0) > 0 and m*sin(alpha_plus) > 0.
RouthResult routh_classify(const ControlParams& p, TwoAgentType type);

struct NumericEigs {
  std::vector<std::complex<double>> eigenvalues;
  std::vector<bool> structural;  // quotient/constraint modes, excluded below
  Classification classification = Classification::Marginal;
  double max_residual = 0.0;  // worst ||Av - lambda v|| over eigenpairs
};

// Central-difference Jacobian spectrum at the equilibrium: the 7-state
// reduced dynamics for n == 2 (structural flag: the conjugate pair nearest
// +-j/rho_b), the full 5n shape field otherwise (structural flag:
// |Re| < kStabEps; 2n+1 such modes are expected).
NumericEigs numeric_eigenvalues(const EquilibriumSpec& e,
                                const ControlParams& p);

// Aggregated report for one equilibrium. The analytic layer (polynomial,
// Routh) is present only for two-agent symmetric params away from the
// degenerate family.
struct StabilityReport {
  EquilibriumSpec spec;
  NumericEigs numeric;
  bool has_analytic = false;
  TwoAgentType type{};  // valid when has_analytic
  CharPoly poly;
  std::vector<std::complex<double>> poly_roots;
  RouthResult routh;
  double max_root_gap = 0.0;  // worst poly-root vs numeric-eigenvalue match
  bool agreement = true;      // analytic vs numeric classification
  Classification classification = Classification::Marginal;  // authoritative
};

StabilityReport stability_report(const EquilibriumSpec& e,
                                 const ControlParams& p);

// Greedy nearest pairing of two equal-size complex multisets; returns the
// worst matched distance.
double max_pair_gap(std::vector<std::complex<double>> a,
                    std::vector<std::complex<double>> b);

}  // namespace bcp
