#include "bcp/types.hpp"

#include <cmath>
#include <string>

#include "bcp/errors.hpp"

namespace bcp {

namespace {

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

void WorldState::validate() const {
  if (agents.size() < 2)
    fail(ErrorCode::InvalidArgument, "world state needs at least 2 agents");
  if (!std::isfinite(beacon.x) || !std::isfinite(beacon.y) ||
      !std::isfinite(time))
    fail(ErrorCode::InvalidArgument, "world state has non-finite fields");
  for (size_t i = 0; i < agents.size(); ++i) {
    const AgentState& a = agents[i];
    if (!std::isfinite(a.position.x) || !std::isfinite(a.position.y) ||
        !std::isfinite(a.heading) || !std::isfinite(a.speed))
      fail(ErrorCode::InvalidArgument,
           "agent " + std::to_string(i + 1) + " has non-finite fields");
    if (a.speed <= 0.0)
      fail(ErrorCode::InvalidArgument,
           "agent " + std::to_string(i + 1) + " speed must be positive");
  }
}

ControlParams ControlParams::symmetric(double lambda, double mu, double alpha0,
                                       std::vector<double> alpha) {
  ControlParams p;
  p.lambda = lambda;
  size_t n = alpha.size();
  p.mu.assign(n, mu);
  p.mu_b.assign(n, mu);
  p.alpha_b.assign(n, alpha0);
  p.alpha = std::move(alpha);
  return p;
}

void ControlParams::validate(int n) const {
  if (n < 2) fail(ErrorCode::InvalidArgument, "params need n >= 2");
  if (!(lambda > 0.0) || !(lambda < 1.0))
    fail(ErrorCode::InvalidArgument, "lambda must lie in (0, 1)");
  auto check = [&](const std::vector<double>& v, const char* name,
                   bool positive) {
    if (static_cast<int>(v.size()) != n)
      fail(ErrorCode::InvalidArgument,
           std::string(name) + " must have length n");
    if (!all_finite(v))
      fail(ErrorCode::InvalidArgument, std::string(name) + " has non-finite entries");
    if (positive)
      for (double x : v)
        if (!(x > 0.0))
          fail(ErrorCode::InvalidArgument,
               std::string(name) + " entries must be positive");
  };
  check(mu, "mu", true);
  check(alpha, "alpha", false);
  check(mu_b, "mu_b", true);
  check(alpha_b, "alpha_b", false);
}

bool ControlParams::is_symmetric(double tol) const {
  if (mu.empty()) return false;
  double m0 = mu.front(), ab0 = alpha_b.front();
  for (size_t i = 0; i < mu.size(); ++i) {
    if (std::fabs(mu[i] - m0) > tol) return false;
    if (std::fabs(mu_b[i] - m0) > tol) return false;
    if (std::fabs(alpha_b[i] - ab0) > tol) return false;
  }
  return true;
}

void ShapeState::validate() const {
  size_t m = rho.size();
  if (m < 2) fail(ErrorCode::InvalidArgument, "shape state needs n >= 2");
  if (kappa.size() != m || theta.size() != m || rho_b.size() != m ||
      kappa_b.size() != m)
    fail(ErrorCode::InvalidArgument, "shape state field lengths differ");
  if (!all_finite(rho) || !all_finite(kappa) || !all_finite(theta) ||
      !all_finite(rho_b) || !all_finite(kappa_b) || !std::isfinite(time))
    fail(ErrorCode::InvalidArgument, "shape state has non-finite fields");
  for (size_t i = 0; i < m; ++i)
    if (!(rho[i] > 0.0) || !(rho_b[i] > 0.0))
      fail(ErrorCode::InvalidArgument,
           "shape distances must be positive (agent " + std::to_string(i + 1) +
               ")");
}

}  // namespace bcp
