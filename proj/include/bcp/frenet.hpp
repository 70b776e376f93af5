#pragma once

#include "bcp/types.hpp"

namespace bcp {

// Curvature command for agent i from the Cartesian state:
//   u_i = (1 - lambda) * u_cb_i + lambda * u_b_i
// where u_cb_i steers toward agent i+1 at bearing offset alpha_i (plus the
// baseline-rotation feedforward) and u_b_i steers toward the beacon at offset
// alpha_b_i. Throws DegenerateGeometry when a needed distance is < kGeomEps.
double control_cartesian(const WorldState& w, const ControlParams& p, int i);

// Velocities and heading rates of every agent under the control law.
WorldRates full_state_derivative(const WorldState& w, const ControlParams& p);

// Relative coordinates of a Cartesian state. Throws DegenerateGeometry if an
// agent sits on its ring neighbor or on the beacon.
ShapeState extract_shape(const WorldState& w);

}  // namespace bcp
