#include "bcp/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bcp/equilibria.hpp"
#include "bcp/errors.hpp"
#include "bcp/format.hpp"
#include "bcp/frenet.hpp"
#include "bcp/geometry.hpp"
#include "bcp/shape.hpp"
#include "bcp/sim.hpp"
#include "bcp/stability.hpp"

namespace bcp {

namespace {

using nlohmann::json;

json complex_list(const std::vector<std::complex<double>>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

json params_json(const ControlParams& p) {
  return {{"lambda", p.lambda},
          {"mu", p.mu},
          {"alpha", p.alpha},
          {"mu_b", p.mu_b},
          {"alpha_b", p.alpha_b}};
}

json spec_json(const EquilibriumSpec& e) {
  json j;
  j["direction"] = e.direction > 0 ? "ccw" : "cw";
  j["winding"] = e.winding;
  j["branch"] = e.branch;
  j["alpha_star"] = e.alpha_star;
  j["kappa"] = e.kappa;
  j["kappa_b"] = e.kappa_b;
  j["rho"] = e.rho;
  j["rho_b"] = e.rho_b;
  j["spacing"] = e.spacing;
  j["rate"] = e.rate;
  return j;
}

bool same_spec(const EquilibriumSpec& a, const EquilibriumSpec& b) {
  if (a.direction != b.direction || a.n() != b.n()) return false;
  double gap = 0.0;
  for (int i = 0; i < a.n(); ++i)
    gap = std::max(gap, angle_dist(a.kappa[i], b.kappa[i]));
  return gap < 1e-9 &&
         std::fabs(a.rho_b - b.rho_b) <=
             1e-9 * std::max(1.0, std::fabs(b.rho_b));
}

// Two-agent taxonomy labels aligned with the enumeration order; empty where
// the taxonomy does not apply.
std::vector<std::string> type_labels(const EquilibriumSet& set,
                                     const ControlParams& p) {
  std::vector<std::string> labels(set.specs.size());
  if (set.specs.empty() || set.specs.front().n() != 2) return labels;
  std::vector<ClassifiedEquilibrium> classified;
  try {
    classified = classify_two_agent(p);
  } catch (const Error&) {
    return labels;
  }
  for (const ClassifiedEquilibrium& c : classified)
    for (size_t k = 0; k < set.specs.size(); ++k)
      if (labels[k].empty() && same_spec(set.specs[k], c.spec)) {
        labels[k] = to_string(c.type);
        break;
      }
  return labels;
}

TwoAgentType type_from_name(const std::string& name) {
  for (TwoAgentType t :
       {TwoAgentType::Type1CCW, TwoAgentType::Type1CW, TwoAgentType::Type2CCW,
        TwoAgentType::Type2CW})
    if (name == to_string(t)) return t;
  fail(ErrorCode::InvalidArgument, "unknown equilibrium type '" + name + "'");
}

struct InitResult {
  WorldState world;
  bool has_target = false;
  EquilibriumSpec target;
  std::string target_label;  // type name or enumeration index
};

InitResult build_initial(const Scenario& s) {
  InitResult out;
  switch (s.init.mode) {
    case InitMode::FromEquilibrium: {
      if (!s.init.eq_type.empty()) {
        ClassifiedEquilibrium c =
            two_agent_spec(s.params, type_from_name(s.init.eq_type));
        out.target = c.spec;
        out.target_label = to_string(c.type);
      } else {
        EquilibriumSet set = enumerate_equilibria(s.params);
        if (s.init.eq_index >= static_cast<int>(set.specs.size()))
          fail(ErrorCode::NoSuchEquilibrium,
               "equilibrium index " + std::to_string(s.init.eq_index) +
                   " out of range (found " +
                   std::to_string(set.specs.size()) + ")");
        out.target = set.specs[s.init.eq_index];
        out.target_label = "index " + std::to_string(s.init.eq_index);
      }
      out.has_target = true;
      ShapeState sh = shape_from_spec(out.target);
      out.world = reconstruct_world(sh, s.init.beacon, s.init.psi1);
      if (s.init.perturbation > 0.0) {
        std::mt19937_64 eng(s.seed);
        double dp = s.init.perturbation * out.target.rho_b;
        double dh = s.init.perturbation * kPi;
        for (AgentState& a : out.world.agents) {
          a.position.x += dp * (2.0 * unit_from_bits(eng()) - 1.0);
          a.position.y += dp * (2.0 * unit_from_bits(eng()) - 1.0);
          a.heading =
              wrap_angle(a.heading + dh * (2.0 * unit_from_bits(eng()) - 1.0));
        }
      }
      break;
    }
    case InitMode::Explicit:
      out.world.agents = s.init.agents;
      out.world.beacon = s.init.beacon;
      break;
    case InitMode::Random: {
      std::mt19937_64 eng(s.seed);
      out.world.agents.resize(s.n);
      out.world.beacon = s.init.beacon;
      for (AgentState& a : out.world.agents) {
        a.position.x = s.init.beacon.x +
                       s.init.box_half_width *
                           (2.0 * unit_from_bits(eng()) - 1.0);
        a.position.y = s.init.beacon.y +
                       s.init.box_half_width *
                           (2.0 * unit_from_bits(eng()) - 1.0);
        a.heading = wrap_angle(-kPi + kTwoPi * unit_from_bits(eng()));
        a.speed = 1.0;
      }
      break;
    }
  }
  out.world.time = 0.0;

  // Without a designated equilibrium, measure against the first stable one
  // (falling back to the first listed) so convergence metrics stay defined.
  if (!out.has_target) {
    try {
      EquilibriumSet set = enumerate_equilibria(s.params);
      for (size_t k = 0; k < set.specs.size(); ++k) {
        StabilityReport r = stability_report(set.specs[k], s.params);
        if (r.classification == Classification::Stable) {
          out.target = set.specs[k];
          out.target_label = "index " + std::to_string(k);
          out.has_target = true;
          break;
        }
      }
      if (!out.has_target && !set.specs.empty()) {
        out.target = set.specs.front();
        out.target_label = "index 0";
        out.has_target = true;
      }
    } catch (const Error&) {
      // No enumerable target; metrics are omitted.
    }
  }
  return out;
}

}  // namespace

std::vector<Document> run_equilibria(const Scenario& s) {
  EquilibriumSet set = enumerate_equilibria(s.params);
  std::vector<std::string> labels = type_labels(set, s.params);
  json j;
  j["n"] = s.n;
  j["params"] = params_json(s.params);
  j["continuum"] = set.continuum;
  j["count"] = set.specs.size();
  json arr = json::array();
  for (size_t k = 0; k < set.specs.size(); ++k) {
    json je = spec_json(set.specs[k]);
    je["index"] = k;
    je["residual"] = equilibrium_residual(set.specs[k], s.params);
    if (!labels[k].empty()) je["type"] = labels[k];
    arr.push_back(std::move(je));
  }
  j["equilibria"] = std::move(arr);
  return {{"equilibria.json", j.dump(2) + "\n"}};
}

std::vector<Document> run_stability(const Scenario& s) {
  EquilibriumSet set = enumerate_equilibria(s.params);
  json reports = json::array();
  for (size_t k = 0; k < set.specs.size(); ++k) {
    StabilityReport r = stability_report(set.specs[k], s.params);
    json jr;
    jr["index"] = k;
    jr["spec"] = spec_json(r.spec);
    jr["classification"] = to_string(r.classification);
    json structural = json::array();
    for (bool b : r.numeric.structural) structural.push_back(b);
    jr["numeric"] = {{"eigenvalues", complex_list(r.numeric.eigenvalues)},
                     {"structural", std::move(structural)},
                     {"classification", to_string(r.numeric.classification)},
                     {"max_residual", r.numeric.max_residual}};
    if (r.has_analytic) {
      json conditions = json::array();
      for (const SignCondition& c : r.routh.conditions)
        conditions.push_back({{"name", c.name},
                              {"value", c.value},
                              {"satisfied", c.satisfied}});
      json coeffs = json::array();
      for (double c : r.poly.coeffs) coeffs.push_back(c);
      jr["analytic"] = {
          {"type", to_string(r.type)},
          {"delta", r.poly.delta},
          {"psi", r.poly.psi},
          {"c0", r.poly.c0},
          {"coefficients", std::move(coeffs)},
          {"roots", complex_list(r.poly_roots)},
          {"routh",
           {{"classification", to_string(r.routh.classification)},
            {"conditions", std::move(conditions)}}},
          {"max_root_gap", r.max_root_gap},
          {"agreement", r.agreement}};
    }
    reports.push_back(std::move(jr));
  }
  json j;
  j["n"] = s.n;
  j["params"] = params_json(s.params);
  j["continuum"] = set.continuum;
  j["reports"] = std::move(reports);
  return {{"stability.json", j.dump(2) + "\n"}};
}

std::vector<Document> run_simulation(const Scenario& s, bool emit_plot_data) {
  if (!s.has_sim)
    fail(ErrorCode::Config, "/sim: required for simulation runs");
  InitResult init = build_initial(s);

  Trajectory traj;
  if (s.sim.representation == Representation::Shape) {
    ShapeState sh = extract_shape(init.world);
    traj = integrate_shape(sh, s.params, s.sim);
  } else {
    traj = integrate(init.world, s.params, s.sim);
  }

  json jm;
  jm["aborted"] = traj.aborted;
  if (traj.aborted) {
    jm["abort_time"] = traj.abort_time;
    jm["abort_reason"] = traj.abort_reason;
  }
  jm["samples"] = traj.times.size();
  jm["t_final"] = traj.times.empty() ? 0.0 : traj.times.back();
  json events = json::array();
  for (const Event& e : s.sim.events) {
    json je;
    je["time"] = e.time;
    if (const auto* kick = std::get_if<HeadingKick>(&e.action)) {
      je["kind"] = "heading_kick";
      je["agent"] = kick->agent + 1;
      je["delta"] = kick->delta;
    } else if (const auto* move = std::get_if<BeaconMove>(&e.action)) {
      je["kind"] = "beacon_move";
      je["position"] = {move->position.x, move->position.y};
    }
    events.push_back(std::move(je));
  }
  jm["events"] = std::move(events);
  if (init.has_target) {
    ConvergenceMetrics m = convergence_metrics(traj, init.target);
    jm["target"] = {{"label", init.target_label},
                    {"direction", init.target.direction > 0 ? "ccw" : "cw"},
                    {"rho_b", init.target.rho_b},
                    {"spacing", init.target.spacing},
                    {"rate", init.target.rate}};
    jm["settled"] = m.settled;
    if (m.settled) jm["settling_time"] = m.settling_time;
    jm["final_radius_error"] = m.final_radius_error;
    jm["final_spacing_error"] = m.final_spacing_error;
    json segments = json::array();
    for (const SegmentMetrics& seg : m.segments) {
      json js = {{"t_start", seg.t_start},
                 {"t_end", seg.t_end},
                 {"settled", seg.settled}};
      if (seg.settled) js["settling_time"] = seg.settling_time;
      segments.push_back(std::move(js));
    }
    jm["segments"] = std::move(segments);
  } else {
    jm["target"] = nullptr;
  }

  std::vector<Document> docs;
  docs.push_back({"trajectory.csv", trajectory_csv(traj)});
  docs.push_back({"metrics.json", jm.dump(2) + "\n"});
  if (emit_plot_data) docs.push_back({"plot_data.csv", plot_data_csv(traj)});
  return docs;
}

namespace {

std::string sweep_rows(const ControlParams& p, double lambda, double mu,
                       double alpha0, double ap, double am) {
  std::string head = format_double(lambda) + "," + format_double(mu) + "," +
                     format_double(alpha0) + "," + format_double(ap) + "," +
                     format_double(am) + ",";
  std::string out;
  auto blank_row = [&](const char* type) {
    out += head;
    out += type;
    out += ",,,,,\n";
  };
  std::vector<ClassifiedEquilibrium> classified;
  try {
    classified = classify_two_agent(p);
  } catch (const Error& e) {
    blank_row(e.code() == ErrorCode::DegenerateFamily ? "continuum"
                                                      : "invalid");
    return out;
  }
  if (classified.empty()) {
    blank_row("none");
    return out;
  }
  for (const ClassifiedEquilibrium& c : classified) {
    RouthResult routh = routh_classify(p, c.type);
    out += head;
    out += to_string(c.type);
    out += ",";
    out += format_double(c.spec.rho_b) + "," + format_double(c.spec.rho[0]) +
           "," + format_double(c.spec.spacing[0]) + "," +
           format_double(c.spec.spacing[1]) + "," +
           to_string(routh.classification);
    out += "\n";
  }
  return out;
}

}  // namespace

std::vector<Document> run_sweep(const Scenario& s, int max_threads) {
  if (s.sweep.empty())
    fail(ErrorCode::Config, "/sweep: required for sweep runs");
  if (s.n != 2) fail(ErrorCode::Config, "/sweep: sweeps require n = 2");
  s.params.validate(2);

  size_t total = 1;
  for (const SweepAxis& ax : s.sweep) {
    total *= static_cast<size_t>(ax.count);
    if (total > 10'000'000)
      fail(ErrorCode::InvalidArgument, "sweep grid exceeds 10^7 points");
  }

  double base_ap = 0.5 * (s.params.alpha[0] + s.params.alpha[1]);
  double base_am = 0.5 * (s.params.alpha[0] - s.params.alpha[1]);

  auto axis_value = [](const SweepAxis& ax, int k) {
    if (ax.count == 1) return ax.lo;
    return ax.lo + (ax.hi - ax.lo) * static_cast<double>(k) /
                       static_cast<double>(ax.count - 1);
  };

  std::vector<std::string> rows(total);
  auto work = [&](size_t start, size_t stride) {
    for (size_t idx = start; idx < total; idx += stride) {
      double lambda = s.params.lambda;
      double mu = s.params.mu[0];
      double alpha0 = s.params.alpha_b[0];
      double ap = base_ap;
      double am = base_am;
      size_t rem = idx;
      // Row-major order over the axes: the last axis varies fastest.
      for (size_t a = s.sweep.size(); a-- > 0;) {
        const SweepAxis& ax = s.sweep[a];
        int k = static_cast<int>(rem % static_cast<size_t>(ax.count));
        rem /= static_cast<size_t>(ax.count);
        double v = axis_value(ax, k);
        if (ax.param == "lambda")
          lambda = v;
        else if (ax.param == "mu")
          mu = v;
        else if (ax.param == "alpha0")
          alpha0 = v;
        else if (ax.param == "alpha_plus")
          ap = v;
        else
          am = v;
      }
      try {
        ControlParams p =
            ControlParams::symmetric(lambda, mu, alpha0, {ap + am, ap - am});
        p.validate(2);
        rows[idx] = sweep_rows(p, lambda, mu, alpha0, ap, am);
      } catch (const Error&) {
        rows[idx] = format_double(lambda) + "," + format_double(mu) + "," +
                    format_double(alpha0) + "," + format_double(ap) + "," +
                    format_double(am) + ",invalid,,,,,\n";
      }
    }
  };

  size_t threads = max_threads > 0
                       ? static_cast<size_t>(max_threads)
                       : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, total);
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (size_t w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        try {
          work(w, threads);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::string csv =
      "lambda,mu,alpha0,alpha_plus,alpha_minus,type,rho_b,rho_side,"
      "spacing_1,spacing_2,classification\n";
  for (const std::string& r : rows) csv += r;
  return {{"sweep.csv", csv}};
}

}  // namespace bcp
