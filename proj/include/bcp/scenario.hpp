#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcp/sim.hpp"
#include "bcp/types.hpp"

namespace bcp {

enum class InitMode { FromEquilibrium, Explicit, Random };

struct InitSpec {
  InitMode mode = InitMode::FromEquilibrium;
  Vec2 beacon;  // world beacon position (all modes)

  // FromEquilibrium: pick by two-agent type name or by enumeration index.
  std::string eq_type;        // "type1_ccw" etc.; empty = use eq_index
  int eq_index = 0;           // into enumerate_equilibria order
  double perturbation = 0.0;  // relative offset magnitude, in [0, 0.5]
  double psi1 = 0.0;          // world bearing of agent 1 from the beacon

  // Explicit:
  std::vector<AgentState> agents;

  // Random: positions uniform in a centered box about the beacon, headings
  // uniform on the circle.
  double box_half_width = 1.0;
};

struct SweepAxis {
  std::string param;  // lambda | mu | alpha0 | alpha_plus | alpha_minus
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
};

struct Scenario {
  int n = 0;
  ControlParams params;
  InitSpec init;
  SimConfig sim;
  bool has_sim = false;  // a "sim" block was given
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::vector<SweepAxis> sweep;  // non-empty only for sweep configs
};

// Exact value of an angle literal: a number, or "pi"-carrying strings such
// as "pi/3", "-3pi/4", "0.25pi", "2pi/5". Throws InvalidArgument.
double parse_angle(const std::string& text);

// Parse/serialize the versioned scenario JSON (version 1). Angle-valued
// fields accept numbers (radians) or angle literals. Rejections throw
// Error(Config) whose message starts with the JSON pointer of the offending
// field. parse(serialize(s)) reproduces s exactly.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);

}  // namespace bcp
