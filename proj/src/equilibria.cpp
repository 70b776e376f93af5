#include "bcp/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bcp/errors.hpp"
#include "bcp/shape.hpp"

namespace bcp {

namespace {

// Side lengths and radius must clear kPosEps; kappa comes from the branch
// bearing formula kappa_i = pi*(1-sigma_i)/2 + sigma_i*alpha_star + alpha_i.
bool try_build(double lambda, double mu, double alpha0,
               const std::vector<double>& alpha, const std::vector<int>& sigma,
               int m, double alpha_star, int sdir, EquilibriumSpec* out) {
  int n = static_cast<int>(alpha.size());
  std::vector<double> kappa(n);
  for (int i = 0; i < n; ++i) {
    kappa[i] = wrap_angle(kPi * (1 - sigma[i]) / 2.0 + sigma[i] * alpha_star +
                          alpha[i]);
    if (sdir * std::sin(kappa[i]) <= kPosEps) return false;
  }
  double denom =
      mu * (std::cos(alpha0) +
            (1.0 / lambda - 1.0) * sdir * std::sin(alpha_star));
  if (denom <= kPosEps) return false;

  out->direction = sdir;
  out->winding = m;
  out->branch = sigma;
  out->alpha_star = wrap_angle(alpha_star);
  out->kappa = std::move(kappa);
  out->kappa_b = sdir * kPi / 2.0;
  out->rho_b = 1.0 / denom;
  out->rho.resize(n);
  out->spacing.resize(n);
  for (int i = 0; i < n; ++i) {
    out->rho[i] = 2.0 * out->rho_b * sdir * std::sin(out->kappa[i]);
    out->spacing[i] = wrap_two_pi(2.0 * out->kappa[i]);
  }
  out->rate = sdir / out->rho_b;
  return true;
}

bool same_equilibrium(const EquilibriumSpec& a, const EquilibriumSpec& b) {
  if (a.direction != b.direction) return false;
  if (std::fabs(a.rho_b - b.rho_b) >
      1e-9 * std::max(1.0, std::fabs(a.rho_b)))
    return false;
  for (size_t i = 0; i < a.kappa.size(); ++i)
    if (angle_dist(a.kappa[i], b.kappa[i]) > 1e-9) return false;
  return true;
}

struct SymmetricParams {
  double lambda, mu, alpha0;
};

SymmetricParams require_symmetric(const ControlParams& p, int n) {
  p.validate(n);
  if (!p.is_symmetric())
    fail(ErrorCode::AssumptionViolation,
         "equilibrium analysis requires shared gains and a shared beacon "
         "offset");
  return {p.lambda, p.shared_mu(), p.shared_alpha_b()};
}

}  // namespace

EquilibriumSet enumerate_equilibria(const ControlParams& p) {
  int n = p.n();
  SymmetricParams sp = require_symmetric(p, n);
  if (n > 12)
    fail(ErrorCode::InvalidArgument,
         "branch enumeration is limited to n <= 12");
  double alpha_sum = std::accumulate(p.alpha.begin(), p.alpha.end(), 0.0);

  EquilibriumSet out;
  if (n % 2 == 0 && std::fabs(std::sin(alpha_sum)) < 1e-12)
    out.continuum = true;

  std::vector<int> sigma(n);
  for (unsigned bits = 0; bits < (1u << n); ++bits) {
    int m_plus = 0;
    for (int i = 0; i < n; ++i) {
      sigma[i] = (bits >> i) & 1u ? -1 : +1;
      if (sigma[i] > 0) ++m_plus;
    }
    int d = 2 * m_plus - n;
    if (d == 0) continue;  // balanced branches only carry the continuum
    int ad = std::abs(d);
    // Winding integers give inequivalent bearings only modulo 2|d|.
    for (int m = n - m_plus - ad; m <= n - m_plus + ad - 1; ++m) {
      double alpha_star = ((m + m_plus - n) * kPi - alpha_sum) / d;
      for (int sdir : {+1, -1}) {
        EquilibriumSpec spec;
        if (!try_build(sp.lambda, sp.mu, sp.alpha0, p.alpha, sigma, m,
                       alpha_star, sdir, &spec))
          continue;
        bool dup = false;
        for (const EquilibriumSpec& seen : out.specs)
          if (same_equilibrium(seen, spec)) {
            dup = true;
            break;
          }
        if (!dup) out.specs.push_back(std::move(spec));
      }
    }
  }

  std::sort(out.specs.begin(), out.specs.end(),
            [](const EquilibriumSpec& a, const EquilibriumSpec& b) {
              if (a.direction != b.direction) return a.direction > b.direction;
              if (a.alpha_star != b.alpha_star)
                return a.alpha_star < b.alpha_star;
              return a.kappa < b.kappa;
            });
  return out;
}

const char* to_string(TwoAgentType t) {
  switch (t) {
    case TwoAgentType::Type1CCW: return "type1_ccw";
    case TwoAgentType::Type1CW: return "type1_cw";
    case TwoAgentType::Type2CCW: return "type2_ccw";
    case TwoAgentType::Type2CW: return "type2_cw";
  }
  return "?";
}

std::vector<ClassifiedEquilibrium> classify_two_agent(const ControlParams& p) {
  if (p.n() != 2)
    fail(ErrorCode::InvalidArgument, "the taxonomy is defined for n == 2");
  SymmetricParams sp = require_symmetric(p, 2);
  double a_plus = (p.alpha[0] + p.alpha[1]) / 2.0;
  if (std::fabs(std::sin(2.0 * a_plus)) < 1e-12)
    fail(ErrorCode::DegenerateFamily,
         "sum of bearing offsets is a multiple of pi; equilibria form a "
         "continuum");

  // (type, direction s, branch integer m); Type 1 has m == s, Type 2 m == -s.
  constexpr struct {
    TwoAgentType type;
    int s, m;
  } kTable[] = {
      {TwoAgentType::Type1CCW, +1, +1},
      {TwoAgentType::Type1CW, -1, -1},
      {TwoAgentType::Type2CCW, +1, -1},
      {TwoAgentType::Type2CW, -1, +1},
  };

  std::vector<ClassifiedEquilibrium> out;
  for (const auto& row : kTable) {
    double alpha_star = row.m * kPi / 2.0 - a_plus;
    EquilibriumSpec spec;
    if (try_build(sp.lambda, sp.mu, sp.alpha0, p.alpha, {+1, +1}, row.m,
                  alpha_star, row.s, &spec))
      out.push_back({row.type, std::move(spec)});
  }
  return out;
}

ClassifiedEquilibrium two_agent_spec(const ControlParams& p, TwoAgentType t) {
  for (ClassifiedEquilibrium& c : classify_two_agent(p))
    if (c.type == t) return std::move(c);
  fail(ErrorCode::NoSuchEquilibrium,
       std::string(to_string(t)) + " does not exist for these parameters");
}

ShapeState shape_from_spec(const EquilibriumSpec& e) {
  int n = e.n();
  if (n < 2 || static_cast<int>(e.rho.size()) != n)
    fail(ErrorCode::InvalidArgument, "malformed equilibrium spec");
  ShapeState s;
  s.rho = e.rho;
  s.kappa = e.kappa;
  s.theta.resize(n);
  for (int i = 0; i < n; ++i)
    s.theta[(i + 1) % n] = wrap_angle(kPi - e.kappa[i]);
  s.rho_b.assign(n, e.rho_b);
  s.kappa_b.assign(n, e.kappa_b);
  return s;
}

double equilibrium_residual(const EquilibriumSpec& e, const ControlParams& p) {
  ShapeRates r = shape_derivative(shape_from_spec(e), p);
  double worst = 0.0;
  for (const std::vector<double>* v :
       {&r.rho, &r.kappa, &r.theta, &r.rho_b, &r.kappa_b})
    for (double x : *v) worst = std::max(worst, std::fabs(x));
  return worst;
}

}  // namespace bcp
