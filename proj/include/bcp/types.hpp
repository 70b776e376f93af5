#pragma once

#include <vector>

#include "bcp/geometry.hpp"

namespace bcp {

// One planar self-steering particle. The body frame is (x, y) with
// x = (cos heading, sin heading); the control input is the curvature of the
// path, heading_rate = speed * u.
struct AgentState {
  Vec2 position;         // [m]
  double heading = 0.0;  // [rad], wrapped to [-pi, pi)
  double speed = 1.0;    // [m/s], > 0
};

// Cartesian state of the collective plus the (piecewise) fixed beacon.
// Agents are in ring order: agent i steers toward agent i+1 (mod n).
struct WorldState {
  std::vector<AgentState> agents;  // n >= 2
  Vec2 beacon;
  double time = 0.0;  // [s]

  int n() const { return static_cast<int>(agents.size()); }
  void validate() const;  // throws InvalidArgument
};

// Gains and bearing offsets of the blended steering law
//   u_i = (1 - lambda) * u_cb_i + lambda * u_b_i.
// All per-agent vectors have length n.
struct ControlParams {
  double lambda = 0.5;          // beacon blend, in (0, 1)
  std::vector<double> mu;       // neighbor gain, > 0
  std::vector<double> alpha;    // neighbor bearing offset [rad]
  std::vector<double> mu_b;     // beacon gain, > 0
  std::vector<double> alpha_b;  // beacon bearing offset [rad]

  // Shared gain mu for both terms and shared beacon offset alpha0 (the
  // symmetric setting every analysis routine assumes).
  static ControlParams symmetric(double lambda, double mu, double alpha0,
                                 std::vector<double> alpha);

  int n() const { return static_cast<int>(mu.size()); }
  void validate(int n) const;  // throws InvalidArgument
  // True when mu == mu_b elementwise with one shared value and alpha_b is
  // constant. Speeds are checked separately on the state.
  bool is_symmetric(double tol = 1e-12) const;
  double shared_mu() const { return mu.front(); }
  double shared_alpha_b() const { return alpha_b.front(); }
};

// Relative coordinates of the collective, per agent i (ring indices mod n):
//   rho_i     side length |r_{i+1} - r_i|
//   kappa_i   bearing of agent i+1 from agent i's heading
//   theta_i   bearing of agent i-1 from agent i's heading
//   rho_b_i   beacon distance
//   kappa_b_i bearing of the beacon from agent i's heading
// Realizable states satisfy the closure constraints (see closure_residual).
struct ShapeState {
  std::vector<double> rho;      // [m], > 0
  std::vector<double> kappa;    // [rad], wrapped to [-pi, pi)
  std::vector<double> theta;    // [rad]
  std::vector<double> rho_b;    // [m], > 0
  std::vector<double> kappa_b;  // [rad]
  double time = 0.0;            // [s]

  int n() const { return static_cast<int>(rho.size()); }
  void validate() const;  // sizes, positivity, finiteness
};

// Time derivative of a ShapeState (no positivity invariants).
struct ShapeRates {
  std::vector<double> rho;
  std::vector<double> kappa;
  std::vector<double> theta;
  std::vector<double> rho_b;
  std::vector<double> kappa_b;
};

// Time derivative of a WorldState.
struct WorldRates {
  std::vector<Vec2> velocity;
  std::vector<double> heading_rate;
};

}  // namespace bcp
