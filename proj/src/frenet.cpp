#include "bcp/frenet.hpp"

#include <cmath>
#include <string>

#include "bcp/errors.hpp"

namespace bcp {

namespace {

// Offset `to - from`, guarded against coincident points.
Vec2 separation(Vec2 to, Vec2 from, const char* what, int i) {
  Vec2 d = to - from;
  if (norm(d) < kGeomEps)
    fail(ErrorCode::DegenerateGeometry,
         std::string("agent ") + std::to_string(i + 1) + " coincides with " +
             what);
  return d;
}

double control_at(const WorldState& w, const ControlParams& p, int i) {
  int n = w.n();
  int ip = (i + 1) % n;
  const AgentState& self = w.agents[i];
  const AgentState& next = w.agents[ip];

  Vec2 d_next = separation(next.position, self.position, "its neighbor", i);
  Vec2 d_b = separation(w.beacon, self.position, "the beacon", i);
  double rho = norm(d_next);

  double kappa = wrap_angle(vec_angle(d_next) - self.heading);
  double kappa_b = wrap_angle(vec_angle(d_b) - self.heading);
  // Bearing of this agent seen from its neighbor, used by the
  // baseline-rotation feedforward.
  double theta_next = wrap_angle(vec_angle(-d_next) - next.heading);

  double u_cb = p.mu[i] * std::sin(kappa - p.alpha[i]) +
                (std::sin(kappa) +
                 (next.speed / self.speed) * std::sin(theta_next)) /
                    rho;
  double u_b = p.mu_b[i] * std::sin(kappa_b - p.alpha_b[i]);
  return (1.0 - p.lambda) * u_cb + p.lambda * u_b;
}

}  // namespace

double control_cartesian(const WorldState& w, const ControlParams& p, int i) {
  w.validate();
  p.validate(w.n());
  if (i < 0 || i >= w.n())
    fail(ErrorCode::InvalidArgument, "agent index out of range");
  return control_at(w, p, i);
}

WorldRates full_state_derivative(const WorldState& w, const ControlParams& p) {
  w.validate();
  p.validate(w.n());
  int n = w.n();
  WorldRates r;
  r.velocity.resize(n);
  r.heading_rate.resize(n);
  for (int i = 0; i < n; ++i) {
    const AgentState& a = w.agents[i];
    r.velocity[i] = a.speed * unit_vec(a.heading);
    r.heading_rate[i] = a.speed * control_at(w, p, i);
  }
  return r;
}

ShapeState extract_shape(const WorldState& w) {
  w.validate();
  int n = w.n();
  ShapeState s;
  s.rho.resize(n);
  s.kappa.resize(n);
  s.theta.resize(n);
  s.rho_b.resize(n);
  s.kappa_b.resize(n);
  s.time = w.time;
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1) % n;
    int im = (i + n - 1) % n;
    Vec2 d_next = separation(w.agents[ip].position, w.agents[i].position,
                             "its neighbor", i);
    Vec2 d_prev = w.agents[im].position - w.agents[i].position;
    Vec2 d_b = separation(w.beacon, w.agents[i].position, "the beacon", i);
    double h = w.agents[i].heading;
    s.rho[i] = norm(d_next);
    s.kappa[i] = wrap_angle(vec_angle(d_next) - h);
    s.theta[i] = wrap_angle(vec_angle(d_prev) - h);
    s.rho_b[i] = norm(d_b);
    s.kappa_b[i] = wrap_angle(vec_angle(d_b) - h);
  }
  return s;
}

}  // namespace bcp
