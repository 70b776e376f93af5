#include "bcp/shape.hpp"

#include <cmath>
#include <string>

#include "bcp/errors.hpp"

namespace bcp {

namespace {

void check_distances(const ShapeState& s) {
  for (int i = 0; i < s.n(); ++i)
    if (s.rho[i] < kGeomEps || s.rho_b[i] < kGeomEps)
      fail(ErrorCode::DegenerateGeometry,
           "shape distance below the geometric threshold (agent " +
               std::to_string(i + 1) + ")");
}

double control_term(const ShapeState& s, const ControlParams& p, int i,
                    double speed_ratio) {
  int ip = (i + 1) % s.n();
  double u_cb =
      p.mu[i] * std::sin(s.kappa[i] - p.alpha[i]) +
      (std::sin(s.kappa[i]) + speed_ratio * std::sin(s.theta[ip])) / s.rho[i];
  double u_b = p.mu_b[i] * std::sin(s.kappa_b[i] - p.alpha_b[i]);
  return (1.0 - p.lambda) * u_cb + p.lambda * u_b;
}

}  // namespace

double control_shape(const ShapeState& s, const ControlParams& p, int i,
                     const std::vector<double>& speeds) {
  s.validate();
  p.validate(s.n());
  if (i < 0 || i >= s.n())
    fail(ErrorCode::InvalidArgument, "agent index out of range");
  if (!speeds.empty() && static_cast<int>(speeds.size()) != s.n())
    fail(ErrorCode::InvalidArgument, "speeds must have length n");
  check_distances(s);
  double ratio =
      speeds.empty() ? 1.0 : speeds[(i + 1) % s.n()] / speeds[i];
  return control_term(s, p, i, ratio);
}

ShapeRates shape_derivative(const ShapeState& s, const ControlParams& p) {
  int n = s.n();
  s.validate();
  p.validate(n);
  if (!p.is_symmetric())
    fail(ErrorCode::AssumptionViolation,
         "shape dynamics require shared gains and a shared beacon offset");
  check_distances(s);

  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = control_term(s, p, i, 1.0);

  ShapeRates r;
  r.rho.resize(n);
  r.kappa.resize(n);
  r.theta.resize(n);
  r.rho_b.resize(n);
  r.kappa_b.resize(n);
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1) % n;
    int im = (i + n - 1) % n;
    r.rho[i] = -(std::cos(s.kappa[i]) + std::cos(s.theta[ip]));
    r.kappa[i] =
        (std::sin(s.kappa[i]) + std::sin(s.theta[ip])) / s.rho[i] - u[i];
    r.theta[i] =
        (std::sin(s.kappa[im]) + std::sin(s.theta[i])) / s.rho[im] - u[i];
    r.rho_b[i] = -std::cos(s.kappa_b[i]);
    r.kappa_b[i] = std::sin(s.kappa_b[i]) / s.rho_b[i] - u[i];
  }
  return r;
}

double closure_residual(const ShapeState& s) {
  s.validate();
  int n = s.n();
  // Heading increments around the ring must sum to a full turn multiple.
  double angle_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1) % n;
    angle_sum += kPi + s.kappa[i] - s.theta[ip];
  }
  double res = std::fabs(wrap_angle(angle_sum));
  // Per-agent beacon triangle: the side vector equals the difference of the
  // two beacon legs, expressed in the frame of the i -> i+1 baseline.
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1) % n;
    Vec2 lhs{s.rho[i], 0.0};
    Vec2 leg_i = s.rho_b[i] * unit_vec(s.kappa_b[i] - s.kappa[i]);
    Vec2 leg_ip = s.rho_b[ip] * unit_vec(s.kappa_b[ip] - s.theta[ip]);
    double r = norm(lhs - leg_i - leg_ip);
    if (r > res) res = r;
  }
  return res;
}

WorldState reconstruct_world(const ShapeState& s, Vec2 beacon, double psi1) {
  s.validate();
  double res = closure_residual(s);
  if (res > kConsistencyEps)
    fail(ErrorCode::InconsistentShape,
         "shape closure residual " + std::to_string(res) +
             " exceeds tolerance");
  int n = s.n();
  WorldState w;
  w.agents.resize(n);
  w.beacon = beacon;
  w.time = s.time;
  // Agent 1 sits at bearing psi1 from the beacon; its heading follows from
  // the beacon bearing kappa_b.
  w.agents[0].position = beacon + s.rho_b[0] * unit_vec(psi1);
  w.agents[0].heading = wrap_angle(psi1 + kPi - s.kappa_b[0]);
  for (int i = 0; i + 1 < n; ++i) {
    double side_dir = w.agents[i].heading + s.kappa[i];
    w.agents[i + 1].position =
        w.agents[i].position + s.rho[i] * unit_vec(side_dir);
    w.agents[i + 1].heading = wrap_angle(side_dir + kPi - s.theta[i + 1]);
  }
  return w;
}

}  // namespace bcp
