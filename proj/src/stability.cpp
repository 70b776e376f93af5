#include "bcp/stability.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "bcp/errors.hpp"
#include "bcp/shape.hpp"

namespace bcp {

namespace {

struct TypeSigns {
  int s;  // direction, sin(kappa_b)
  int m;  // branch integer; +s for Type 1, -s for Type 2
};

TypeSigns signs_of(TwoAgentType t) {
  switch (t) {
    case TwoAgentType::Type1CCW: return {+1, +1};
    case TwoAgentType::Type1CW: return {-1, -1};
    case TwoAgentType::Type2CCW: return {+1, -1};
    case TwoAgentType::Type2CW: return {-1, +1};
  }
  return {+1, +1};
}

// Ascending-coefficient product of two polynomials.
std::vector<double> poly_mul(const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// Roots of x^2 + b*x + c, numerically stable split.
void quad_roots(double b, double c, std::vector<std::complex<double>>* out) {
  double disc = b * b - 4.0 * c;
  if (disc < 0.0) {
    double im = std::sqrt(-disc) / 2.0;
    out->emplace_back(-b / 2.0, im);
    out->emplace_back(-b / 2.0, -im);
    return;
  }
  double q = -(b + std::copysign(std::sqrt(disc), b)) / 2.0;
  if (q == 0.0) {  // b == 0 and disc == 0
    out->emplace_back(0.0, 0.0);
    out->emplace_back(0.0, 0.0);
    return;
  }
  out->emplace_back(q, 0.0);
  out->emplace_back(c / q, 0.0);
}

// Roots of x^3 + a*x^2 + b*x + c (Cardano / trigonometric split).
void cubic_roots(double a, double b, double c,
                 std::vector<std::complex<double>>* out) {
  double p = b - a * a / 3.0;
  double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  double shift = -a / 3.0;
  double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc > 0.0) {
    double root = std::sqrt(disc);
    double u = std::cbrt(-q / 2.0 + root);
    double v = std::cbrt(-q / 2.0 - root);
    double re = -(u + v) / 2.0 + shift;
    double im = std::sqrt(3.0) / 2.0 * (u - v);
    out->emplace_back(u + v + shift, 0.0);
    out->emplace_back(re, im);
    out->emplace_back(re, -im);
    return;
  }
  if (p >= 0.0) {  // disc <= 0 forces p <= 0; p == 0 means a triple root
    out->insert(out->end(), 3, {shift, 0.0});
    return;
  }
  double r = 2.0 * std::sqrt(-p / 3.0);
  double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
  double phi = std::acos(arg);
  for (int k = 0; k < 3; ++k)
    out->emplace_back(r * std::cos((phi - kTwoPi * k) / 3.0) + shift, 0.0);
}

}  // namespace

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Stable: return "stable";
    case Classification::Unstable: return "unstable";
    case Classification::Marginal: return "marginal";
  }
  return "?";
}

std::vector<std::complex<double>> CharPoly::roots() const {
  std::vector<std::complex<double>> out;
  out.reserve(7);
  out.emplace_back(0.0, delta);
  out.emplace_back(0.0, -delta);
  quad_roots(lambda * psi, lambda * delta * delta, &out);
  cubic_roots(lambda * psi, delta * delta, c0, &out);
  return out;
}

double CharPoly::eval_abs(std::complex<double> x) const {
  std::complex<double> acc = 0.0;
  for (int k = 7; k >= 0; --k) acc = acc * x + coeffs[k];
  return std::abs(acc);
}

CharPoly char_poly_two_agent(const ControlParams& p, TwoAgentType type) {
  ClassifiedEquilibrium eq = two_agent_spec(p, type);  // existence gate
  TypeSigns ts = signs_of(type);
  double mu = p.shared_mu();
  double a0 = p.shared_alpha_b();
  double lam = p.lambda;
  double a_plus = (p.alpha[0] + p.alpha[1]) / 2.0;
  double ratio = (1.0 - lam) / lam;

  CharPoly cp;
  cp.lambda = lam;
  cp.delta = mu * (std::cos(a0) + ratio * ts.s * ts.m * std::cos(a_plus));
  cp.psi = mu * (ts.s * std::sin(a0) + ratio * ts.m * std::sin(a_plus));
  cp.c0 = (1.0 - lam) * mu * ts.m * std::sin(a_plus) * cp.delta * cp.delta;

  double d2 = cp.delta * cp.delta;
  std::vector<double> expanded = poly_mul(
      poly_mul({d2, 0.0, 1.0}, {lam * d2, lam * cp.psi, 1.0}),
      {cp.c0, d2, lam * cp.psi, 1.0});
  for (int k = 0; k < 8; ++k) cp.coeffs[k] = expanded[k];
  (void)eq;
  return cp;
}

RouthResult routh_classify(const ControlParams& p, TwoAgentType type) {
  CharPoly cp = char_poly_two_agent(p, type);
  TypeSigns ts = signs_of(type);
  double mu = p.shared_mu();
  double a0 = p.shared_alpha_b();
  double a_plus = (p.alpha[0] + p.alpha[1]) / 2.0;
  double d2 = cp.delta * cp.delta;

  // The two primary signs decide; the damping and Routh margins are implied
  // but reported for inspection.
  double s0 = ts.s * std::sin(a0);
  double sp = ts.m * std::sin(a_plus);
  RouthResult out;
  out.conditions = {
      {"direction_weighted_sin_alpha0", s0, s0 > 0.0},
      {"type_weighted_sin_alpha_plus", sp, sp > 0.0},
      {"damping_coefficient", cp.psi, cp.psi > 0.0},
      {"cubic_routh_margin", p.lambda * cp.psi * d2 - cp.c0,
       p.lambda * cp.psi * d2 - cp.c0 > 0.0},
  };
  constexpr double kMarginalTol = 1e-12;
  if (s0 > kMarginalTol && sp > kMarginalTol)
    out.classification = Classification::Stable;
  else if (s0 < -kMarginalTol || sp < -kMarginalTol)
    out.classification = Classification::Unstable;
  else
    out.classification = Classification::Marginal;
  (void)mu;
  return out;
}

namespace {

// Pack/unpack between a flat vector and the shape state. For n == 2 the
// reduced coordinates (kappa_1, kappa_2, rho, kappa_b1, kappa_b2, rho_b1,
// rho_b2) parameterize the invariant set theta_i == kappa_i, rho_1 == rho_2.
struct FlatSystem {
  int n;
  int dim;
  ShapeState proto;

  explicit FlatSystem(const EquilibriumSpec& e) {
    n = e.n();
    dim = n == 2 ? 7 : 5 * n;
    proto = shape_from_spec(e);
  }

  std::vector<double> pack(const ShapeState& s) const {
    if (n == 2)
      return {s.kappa[0], s.kappa[1], s.rho[0], s.kappa_b[0],
              s.kappa_b[1], s.rho_b[0], s.rho_b[1]};
    std::vector<double> x;
    x.reserve(dim);
    for (const std::vector<double>* v :
         {&s.rho, &s.kappa, &s.theta, &s.rho_b, &s.kappa_b})
      x.insert(x.end(), v->begin(), v->end());
    return x;
  }

  ShapeState unpack(const std::vector<double>& x) const {
    ShapeState s = proto;
    if (n == 2) {
      s.kappa = {x[0], x[1]};
      s.theta = {x[0], x[1]};
      s.rho = {x[2], x[2]};
      s.kappa_b = {x[3], x[4]};
      s.rho_b = {x[5], x[6]};
      return s;
    }
    for (int i = 0; i < n; ++i) {
      s.rho[i] = x[i];
      s.kappa[i] = x[n + i];
      s.theta[i] = x[2 * n + i];
      s.rho_b[i] = x[3 * n + i];
      s.kappa_b[i] = x[4 * n + i];
    }
    return s;
  }

  std::vector<double> rates(const std::vector<double>& x,
                            const ControlParams& p) const {
    ShapeRates r = shape_derivative(unpack(x), p);
    if (n == 2)
      return {r.kappa[0], r.kappa[1], r.rho[0], r.kappa_b[0],
              r.kappa_b[1], r.rho_b[0], r.rho_b[1]};
    std::vector<double> out;
    out.reserve(dim);
    for (const std::vector<double>* v :
         {&r.rho, &r.kappa, &r.theta, &r.rho_b, &r.kappa_b})
      out.insert(out.end(), v->begin(), v->end());
    return out;
  }
};

}  // namespace

NumericEigs numeric_eigenvalues(const EquilibriumSpec& e,
                                const ControlParams& p) {
  FlatSystem sys(e);
  std::vector<double> x0 = sys.pack(sys.proto);

  Eigen::MatrixXd jac(sys.dim, sys.dim);
  for (int j = 0; j < sys.dim; ++j) {
    std::vector<double> xp = x0, xm = x0;
    xp[j] += kFdStep;
    xm[j] -= kFdStep;
    std::vector<double> fp = sys.rates(xp, p);
    std::vector<double> fm = sys.rates(xm, p);
    for (int i = 0; i < sys.dim; ++i)
      jac(i, j) = (fp[i] - fm[i]) / (2.0 * kFdStep);
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(jac);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::IllConditioned, "eigendecomposition did not converge");

  NumericEigs out;
  out.eigenvalues.resize(sys.dim);
  out.structural.assign(sys.dim, false);
  Eigen::MatrixXcd jc = jac.cast<std::complex<double>>();
  for (int k = 0; k < sys.dim; ++k) {
    std::complex<double> lam = solver.eigenvalues()[k];
    out.eigenvalues[k] = lam;
    Eigen::VectorXcd v = solver.eigenvectors().col(k);
    double res = (jc * v - lam * v).norm() / v.norm();
    out.max_residual = std::max(out.max_residual, res);
  }
  if (out.max_residual > kEigResidualTol)
    fail(ErrorCode::IllConditioned,
         "eigenpair residual " + std::to_string(out.max_residual) +
             " exceeds tolerance");

  if (sys.n == 2) {
    // Exactly one conjugate pair is structural, pinned at +-j/rho_b.
    std::complex<double> target(0.0, 1.0 / e.rho_b);
    int best = 0;
    for (int k = 1; k < sys.dim; ++k)
      if (std::abs(out.eigenvalues[k] - target) <
          std::abs(out.eigenvalues[best] - target))
        best = k;
    out.structural[best] = true;
    std::complex<double> conj_target = std::conj(out.eigenvalues[best]);
    int mate = -1;
    for (int k = 0; k < sys.dim; ++k) {
      if (k == best) continue;
      if (mate < 0 || std::abs(out.eigenvalues[k] - conj_target) <
                          std::abs(out.eigenvalues[mate] - conj_target))
        mate = k;
    }
    out.structural[mate] = true;
  } else {
    for (int k = 0; k < sys.dim; ++k)
      if (std::fabs(out.eigenvalues[k].real()) < kStabEps)
        out.structural[k] = true;
  }

  bool any_positive = false, any_marginal = false, any = false;
  for (int k = 0; k < sys.dim; ++k) {
    if (out.structural[k]) continue;
    any = true;
    double re = out.eigenvalues[k].real();
    if (re > kStabEps)
      any_positive = true;
    else if (re > -kStabEps)
      any_marginal = true;
  }
  if (any_positive)
    out.classification = Classification::Unstable;
  else if (any_marginal || !any)
    out.classification = Classification::Marginal;
  else
    out.classification = Classification::Stable;
  return out;
}

double max_pair_gap(std::vector<std::complex<double>> a,
                    std::vector<std::complex<double>> b) {
  double worst = 0.0;
  while (!a.empty() && !b.empty()) {
    size_t bi = 0;
    for (size_t j = 1; j < b.size(); ++j)
      if (std::abs(a.back() - b[j]) < std::abs(a.back() - b[bi])) bi = j;
    worst = std::max(worst, std::abs(a.back() - b[bi]));
    a.pop_back();
    b.erase(b.begin() + bi);
  }
  return worst;
}

StabilityReport stability_report(const EquilibriumSpec& e,
                                 const ControlParams& p) {
  StabilityReport rep;
  rep.spec = e;
  rep.numeric = numeric_eigenvalues(e, p);
  rep.classification = rep.numeric.classification;

  if (e.n() != 2) return rep;
  std::vector<ClassifiedEquilibrium> classified;
  try {
    classified = classify_two_agent(p);
  } catch (const Error&) {
    return rep;  // degenerate family: numeric only
  }
  for (const ClassifiedEquilibrium& c : classified) {
    if (c.spec.direction != e.direction) continue;
    if (angle_dist(c.spec.kappa[0], e.kappa[0]) > 1e-9 ||
        angle_dist(c.spec.kappa[1], e.kappa[1]) > 1e-9)
      continue;
    rep.has_analytic = true;
    rep.type = c.type;
    rep.poly = char_poly_two_agent(p, c.type);
    rep.poly_roots = rep.poly.roots();
    rep.routh = routh_classify(p, c.type);
    rep.max_root_gap = max_pair_gap(rep.poly_roots, rep.numeric.eigenvalues);
    rep.agreement =
        rep.routh.classification == rep.numeric.classification;
    rep.classification = rep.routh.classification;
    break;
  }
  return rep;
}

}  // namespace bcp
