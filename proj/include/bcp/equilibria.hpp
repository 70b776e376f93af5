#pragma once

#include <vector>

#include "bcp/types.hpp"

namespace bcp {

// Strict-positivity margin for existence checks (radii, side lengths).
inline constexpr double kPosEps = 1e-12;

// One circling relative equilibrium: all agents ride a common circle about
// the beacon with radius rho_b, the polygon rotating rigidly at `rate`.
struct EquilibriumSpec {
  int direction = +1;           // +1 CCW, -1 CW; equals sin(kappa_b)
  int winding = 0;              // integer m of the bearing quantization branch
  std::vector<int> branch;      // sigma_i in {-1, +1}
  double alpha_star = 0.0;      // shared bearing solution of the branch [rad]
  std::vector<double> kappa;    // bearing to next agent [rad], wrapped
  double kappa_b = 0.0;         // beacon bearing, +-pi/2 [rad]
  std::vector<double> rho;      // side lengths [m]
  double rho_b = 0.0;           // circle radius [m]
  std::vector<double> spacing;  // beacon angle from agent i to i+1, [0, 2pi)
  double rate = 0.0;            // angular rate about the beacon [rad/s]

  int n() const { return static_cast<int>(kappa.size()); }
};

struct EquilibriumSet {
  std::vector<EquilibriumSpec> specs;  // deduplicated, deterministic order
  bool continuum = false;  // a one-parameter family exists alongside
};

// All isolated circling equilibria for symmetric params. Branches sigma in
// {-1,+1}^n with 2M != n are enumerated over the inequivalent winding
// integers and kept when every side length and the radius clear kPosEps.
// `continuum` is set when n is even and sum(alpha_i) == 0 mod pi (the
// balanced branches then admit a one-parameter family). Throws
// AssumptionViolation for non-symmetric params, InvalidArgument for n > 12.
EquilibriumSet enumerate_equilibria(const ControlParams& p);

// Two-agent taxonomy in terms of the bearing-offset mean
// alpha_plus = (alpha_1 + alpha_2)/2 and half-difference
// alpha_minus = (alpha_1 - alpha_2)/2. Type 1 exists for cos(alpha_minus) > 0,
// Type 2 for cos(alpha_minus) < 0, each in both directions, subject to radius
// positivity.
enum class TwoAgentType { Type1CCW, Type1CW, Type2CCW, Type2CW };
const char* to_string(TwoAgentType t);

struct ClassifiedEquilibrium {
  TwoAgentType type{};
  EquilibriumSpec spec;
};

// Existence-filtered two-agent equilibria, one per type, deterministic order.
// Requires n == 2 and symmetric params; throws DegenerateFamily when
// sin(2 alpha_plus) == 0 (continuum case).
std::vector<ClassifiedEquilibrium> classify_two_agent(const ControlParams& p);

// The spec of one requested type; throws NoSuchEquilibrium if it does not
// exist for these params.
ClassifiedEquilibrium two_agent_spec(const ControlParams& p, TwoAgentType t);

// Shape state realizing a spec: theta_{i+1} = pi - kappa_i, common beacon
// distance and bearing.
ShapeState shape_from_spec(const EquilibriumSpec& e);

// Max-norm of the shape vector field at the spec's shape state.
double equilibrium_residual(const EquilibriumSpec& e, const ControlParams& p);

}  // namespace bcp
