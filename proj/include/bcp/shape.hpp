#pragma once

#include "bcp/types.hpp"

namespace bcp {

// A shape state is realizable in the plane iff closure_residual is zero
// (up to rounding); states within this are accepted for embedding.
inline constexpr double kConsistencyEps = 1e-8;

// Curvature command for agent i evaluated from shape coordinates alone.
// speeds: per-agent speed (the neighbor term needs speed_{i+1}/speed_i);
// empty means unit speeds. Agrees with control_cartesian on consistent
// states.
double control_shape(const ShapeState& s, const ControlParams& p, int i,
                     const std::vector<double>& speeds = {});

// Shape-space vector field under the symmetric assumptions (unit speeds,
// shared gains, shared beacon offset). Throws AssumptionViolation otherwise,
// DegenerateGeometry when a side or beacon distance is < kGeomEps.
ShapeRates shape_derivative(const ShapeState& s, const ControlParams& p);

// Max-norm closure residual: the angle sum around the ring and the per-agent
// beacon-triangle vector identities. Zero (to rounding) iff some planar
// configuration realizes the shape.
double closure_residual(const ShapeState& s);

// Embed a shape state in the plane: beacon at `beacon`, agent 1 placed at
// world bearing psi1 seen from the beacon, unit speeds. Throws
// InconsistentShape when closure_residual(s) > kConsistencyEps.
WorldState reconstruct_world(const ShapeState& s, Vec2 beacon = {},
                             double psi1 = 0.0);

}  // namespace bcp
