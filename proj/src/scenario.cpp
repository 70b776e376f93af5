#include "bcp/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bcp/errors.hpp"
#include "bcp/geometry.hpp"

namespace bcp {

double parse_angle(const std::string& text) {
  size_t b = text.find_first_not_of(" \t");
  size_t e = text.find_last_not_of(" \t");
  if (b == std::string::npos)
    fail(ErrorCode::InvalidArgument, "empty angle literal");
  std::string body = text.substr(b, e - b + 1);
  const char* c = body.data();
  const char* end = c + body.size();

  double sign = 1.0;
  if (c < end && (*c == '+' || *c == '-')) {
    if (*c == '-') sign = -1.0;
    ++c;
  }
  double coef = 1.0;
  bool have_token = false;
  if (c < end && (std::isdigit(static_cast<unsigned char>(*c)) || *c == '.')) {
    auto [ptr, ec] = std::from_chars(c, end, coef);
    if (ec != std::errc())
      fail(ErrorCode::InvalidArgument, "bad angle literal '" + text + "'");
    c = ptr;
    have_token = true;
  }
  double factor = 1.0;
  if (end - c >= 2 && c[0] == 'p' && c[1] == 'i') {
    factor = kPi;
    c += 2;
    have_token = true;
  }
  double div = 1.0;
  if (c < end && *c == '/') {
    ++c;
    auto [ptr, ec] = std::from_chars(c, end, div);
    if (ec != std::errc() || ptr == c || !(div > 0.0))
      fail(ErrorCode::InvalidArgument, "bad angle literal '" + text + "'");
    c = ptr;
  }
  if (c != end || !have_token)
    fail(ErrorCode::InvalidArgument, "bad angle literal '" + text + "'");
  double v = sign * coef * factor / div;
  if (!std::isfinite(v))
    fail(ErrorCode::InvalidArgument, "bad angle literal '" + text + "'");
  return v;
}

namespace {

using nlohmann::json;

[[noreturn]] void cfg_fail(const std::string& path, const std::string& msg) {
  fail(ErrorCode::Config, path + ": " + msg);
}

const json& member(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) cfg_fail(path + "/" + key, "missing required field");
  return *it;
}

void expect_object(const json& j, const std::string& path,
                   std::initializer_list<const char*> allowed) {
  if (!j.is_object()) cfg_fail(path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        known = true;
        break;
      }
    if (!known) cfg_fail(path + "/" + item.key(), "unknown field");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) cfg_fail(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) cfg_fail(path, "expected a finite number");
  return v;
}

double get_angle(const json& j, const std::string& path) {
  if (j.is_number()) return get_number(j, path);
  if (j.is_string()) {
    try {
      return parse_angle(j.get<std::string>());
    } catch (const Error& e) {
      cfg_fail(path, e.what());
    }
  }
  cfg_fail(path, "expected a number or an angle literal");
}

long long get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) cfg_fail(path, "expected an integer");
  return j.get<long long>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) cfg_fail(path, "expected a string");
  return j.get<std::string>();
}

Vec2 get_vec2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) cfg_fail(path, "expected [x, y]");
  return {get_number(j[0], path + "/0"), get_number(j[1], path + "/1")};
}

std::vector<double> get_broadcast(const json& j, const std::string& path,
                                  int n, bool angle) {
  std::vector<double> out;
  if (j.is_array()) {
    if (static_cast<int>(j.size()) != n)
      cfg_fail(path, "expected " + std::to_string(n) + " entries");
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
      const std::string p = path + "/" + std::to_string(i);
      out.push_back(angle ? get_angle(j[i], p) : get_number(j[i], p));
    }
  } else {
    out.assign(n, angle ? get_angle(j, path) : get_number(j, path));
  }
  return out;
}

const char* const kTypeNames[] = {"type1_ccw", "type1_cw", "type2_ccw",
                                  "type2_cw"};

void parse_init(const json& j, Scenario* s) {
  if (!j.is_object()) cfg_fail("/init", "expected an object");
  std::string mode = get_string(member(j, "/init", "mode"), "/init/mode");
  if (mode == "from_equilibrium") {
    expect_object(j, "/init",
                  {"mode", "beacon", "type", "index", "perturbation", "psi1"});
    s->init.mode = InitMode::FromEquilibrium;
    if (j.contains("type") && j.contains("index"))
      cfg_fail("/init/index", "give either type or index, not both");
    if (j.contains("type")) {
      std::string t = get_string(j["type"], "/init/type");
      bool known = false;
      for (const char* name : kTypeNames)
        if (t == name) known = true;
      if (!known) cfg_fail("/init/type", "unknown equilibrium type name");
      if (s->n != 2)
        cfg_fail("/init/type", "equilibrium type names require n = 2");
      s->init.eq_type = t;
    }
    if (j.contains("index")) {
      long long idx = get_int(j["index"], "/init/index");
      if (idx < 0) cfg_fail("/init/index", "expected a non-negative integer");
      s->init.eq_index = static_cast<int>(idx);
    }
    if (j.contains("perturbation")) {
      double p = get_number(j["perturbation"], "/init/perturbation");
      if (p < 0.0 || p > 0.5)
        cfg_fail("/init/perturbation", "must be in [0, 0.5]");
      s->init.perturbation = p;
    }
    if (j.contains("psi1"))
      s->init.psi1 = get_angle(j["psi1"], "/init/psi1");
  } else if (mode == "explicit") {
    expect_object(j, "/init", {"mode", "beacon", "agents"});
    s->init.mode = InitMode::Explicit;
    const json& ja = member(j, "/init", "agents");
    if (!ja.is_array() || static_cast<int>(ja.size()) != s->n)
      cfg_fail("/init/agents",
               "expected " + std::to_string(s->n) + " agents");
    for (int i = 0; i < s->n; ++i) {
      const std::string p = "/init/agents/" + std::to_string(i);
      expect_object(ja[i], p, {"position", "heading", "speed"});
      AgentState a;
      a.position = get_vec2(member(ja[i], p, "position"), p + "/position");
      a.heading = get_angle(member(ja[i], p, "heading"), p + "/heading");
      if (ja[i].contains("speed")) {
        a.speed = get_number(ja[i]["speed"], p + "/speed");
        if (!(a.speed > 0.0)) cfg_fail(p + "/speed", "must be positive");
      }
      s->init.agents.push_back(a);
    }
  } else if (mode == "random") {
    expect_object(j, "/init", {"mode", "beacon", "box_half_width"});
    s->init.mode = InitMode::Random;
    double w = get_number(member(j, "/init", "box_half_width"),
                          "/init/box_half_width");
    if (!(w > 0.0)) cfg_fail("/init/box_half_width", "must be positive");
    s->init.box_half_width = w;
  } else {
    cfg_fail("/init/mode",
             "expected from_equilibrium, explicit, or random");
  }
  if (j.contains("beacon"))
    s->init.beacon = get_vec2(j["beacon"], "/init/beacon");
}

void parse_sim(const json& j, Scenario* s) {
  expect_object(j, "/sim",
                {"dt", "t_end", "integrator", "representation",
                 "record_every", "events"});
  s->has_sim = true;
  if (j.contains("dt")) {
    s->sim.dt = get_number(j["dt"], "/sim/dt");
    if (!(s->sim.dt > 0.0)) cfg_fail("/sim/dt", "must be positive");
  }
  s->sim.t_end = get_number(member(j, "/sim", "t_end"), "/sim/t_end");
  if (!(s->sim.t_end > 0.0)) cfg_fail("/sim/t_end", "must be positive");
  if (j.contains("integrator")) {
    std::string v = get_string(j["integrator"], "/sim/integrator");
    if (v == "rk4")
      s->sim.integrator = Integrator::RK4;
    else if (v == "euler")
      s->sim.integrator = Integrator::Euler;
    else
      cfg_fail("/sim/integrator", "expected rk4 or euler");
  }
  if (j.contains("representation")) {
    std::string v = get_string(j["representation"], "/sim/representation");
    if (v == "full_state")
      s->sim.representation = Representation::FullState;
    else if (v == "shape")
      s->sim.representation = Representation::Shape;
    else
      cfg_fail("/sim/representation", "expected full_state or shape");
  }
  if (j.contains("record_every")) {
    long long r = get_int(j["record_every"], "/sim/record_every");
    if (r < 1) cfg_fail("/sim/record_every", "must be >= 1");
    s->sim.record_every = static_cast<int>(r);
  }
  if (j.contains("events")) {
    const json& je = j["events"];
    if (!je.is_array()) cfg_fail("/sim/events", "expected an array");
    if (!je.empty() && s->sim.representation != Representation::FullState)
      cfg_fail("/sim/events", "events require the full_state representation");
    double prev = -1.0;
    for (size_t k = 0; k < je.size(); ++k) {
      const std::string p = "/sim/events/" + std::to_string(k);
      Event ev;
      std::string kind = get_string(member(je[k], p, "kind"), p + "/kind");
      if (kind == "heading_kick") {
        expect_object(je[k], p, {"time", "kind", "agent", "delta"});
        HeadingKick kick;
        long long agent = get_int(member(je[k], p, "agent"), p + "/agent");
        if (agent < 1 || agent > s->n)
          cfg_fail(p + "/agent", "expected an agent id in [1, " +
                                     std::to_string(s->n) + "]");
        kick.agent = static_cast<int>(agent) - 1;
        kick.delta = get_angle(member(je[k], p, "delta"), p + "/delta");
        ev.action = kick;
      } else if (kind == "beacon_move") {
        expect_object(je[k], p, {"time", "kind", "position"});
        BeaconMove move;
        move.position =
            get_vec2(member(je[k], p, "position"), p + "/position");
        ev.action = move;
      } else {
        cfg_fail(p + "/kind", "expected heading_kick or beacon_move");
      }
      ev.time = get_number(member(je[k], p, "time"), p + "/time");
      if (ev.time < 0.0 || ev.time >= s->sim.t_end)
        cfg_fail(p + "/time", "must be inside [0, t_end)");
      if (!(ev.time > prev))
        cfg_fail(p + "/time", "event times must be strictly increasing");
      prev = ev.time;
      s->sim.events.push_back(ev);
    }
  }
}

void parse_sweep(const json& j, Scenario* s) {
  expect_object(j, "/sweep", {"axes"});
  if (s->n != 2) cfg_fail("/sweep", "sweeps require n = 2");
  const json& ja = member(j, "/sweep", "axes");
  if (!ja.is_array() || ja.empty())
    cfg_fail("/sweep/axes", "expected a non-empty array");
  for (size_t k = 0; k < ja.size(); ++k) {
    const std::string p = "/sweep/axes/" + std::to_string(k);
    expect_object(ja[k], p, {"param", "lo", "hi", "count"});
    SweepAxis ax;
    ax.param = get_string(member(ja[k], p, "param"), p + "/param");
    bool angle = ax.param == "alpha0" || ax.param == "alpha_plus" ||
                 ax.param == "alpha_minus";
    if (!angle && ax.param != "lambda" && ax.param != "mu")
      cfg_fail(p + "/param",
               "expected lambda, mu, alpha0, alpha_plus, or alpha_minus");
    for (const SweepAxis& other : s->sweep)
      if (other.param == ax.param) cfg_fail(p + "/param", "duplicate axis");
    ax.lo = angle ? get_angle(member(ja[k], p, "lo"), p + "/lo")
                  : get_number(member(ja[k], p, "lo"), p + "/lo");
    ax.hi = angle ? get_angle(member(ja[k], p, "hi"), p + "/hi")
                  : get_number(member(ja[k], p, "hi"), p + "/hi");
    long long count = get_int(member(ja[k], p, "count"), p + "/count");
    if (count < 1) cfg_fail(p + "/count", "must be >= 1");
    ax.count = static_cast<int>(count);
    s->sweep.push_back(ax);
  }
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    cfg_fail("/", std::string("invalid JSON: ") + e.what());
  }
  expect_object(root, "",
                {"version", "n", "params", "init", "sim", "seed", "sweep"});
  long long version = get_int(member(root, "", "version"), "/version");
  if (version != 1) cfg_fail("/version", "unsupported version");
  long long n = get_int(member(root, "", "n"), "/n");
  if (n < 2 || n > 12) cfg_fail("/n", "expected n in [2, 12]");

  Scenario s;
  s.n = static_cast<int>(n);

  const json& jp = member(root, "", "params");
  expect_object(jp, "/params", {"lambda", "mu", "alpha", "mu_b", "alpha_b"});
  s.params.lambda =
      get_number(member(jp, "/params", "lambda"), "/params/lambda");
  s.params.mu = get_broadcast(member(jp, "/params", "mu"), "/params/mu",
                              s.n, false);
  s.params.alpha = get_broadcast(member(jp, "/params", "alpha"),
                                 "/params/alpha", s.n, true);
  s.params.alpha_b = get_broadcast(member(jp, "/params", "alpha_b"),
                                   "/params/alpha_b", s.n, true);
  s.params.mu_b = jp.contains("mu_b")
                      ? get_broadcast(jp["mu_b"], "/params/mu_b", s.n, false)
                      : s.params.mu;
  try {
    s.params.validate(s.n);
  } catch (const Error& e) {
    cfg_fail("/params", e.what());
  }

  if (root.contains("init")) parse_init(root["init"], &s);
  if (root.contains("sim")) parse_sim(root["sim"], &s);
  if (root.contains("seed")) {
    const json& js = root["seed"];
    if (js.is_number_unsigned()) {
      s.seed = js.get<std::uint64_t>();
    } else if (js.is_number_integer() && js.get<long long>() >= 0) {
      s.seed = static_cast<std::uint64_t>(js.get<long long>());
    } else {
      cfg_fail("/seed", "expected a non-negative integer");
    }
    s.has_seed = true;
  }
  if (root.contains("sweep")) parse_sweep(root["sweep"], &s);

  if (s.init.mode == InitMode::Random && !s.has_seed)
    cfg_fail("/seed", "required when init.mode is random");
  if (s.has_sim) {
    try {
      s.sim.validate();
    } catch (const Error& e) {
      cfg_fail("/sim", e.what());
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof())
    fail(ErrorCode::Io, "cannot read '" + path + "'");
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  json root;
  root["version"] = 1;
  root["n"] = s.n;
  root["params"] = {{"lambda", s.params.lambda},
                    {"mu", s.params.mu},
                    {"alpha", s.params.alpha},
                    {"mu_b", s.params.mu_b},
                    {"alpha_b", s.params.alpha_b}};
  json ji;
  ji["beacon"] = {s.init.beacon.x, s.init.beacon.y};
  switch (s.init.mode) {
    case InitMode::FromEquilibrium:
      ji["mode"] = "from_equilibrium";
      if (!s.init.eq_type.empty())
        ji["type"] = s.init.eq_type;
      else
        ji["index"] = s.init.eq_index;
      ji["perturbation"] = s.init.perturbation;
      ji["psi1"] = s.init.psi1;
      break;
    case InitMode::Explicit: {
      ji["mode"] = "explicit";
      json agents = json::array();
      for (const AgentState& a : s.init.agents)
        agents.push_back({{"position", {a.position.x, a.position.y}},
                          {"heading", a.heading},
                          {"speed", a.speed}});
      ji["agents"] = std::move(agents);
      break;
    }
    case InitMode::Random:
      ji["mode"] = "random";
      ji["box_half_width"] = s.init.box_half_width;
      break;
  }
  root["init"] = std::move(ji);
  if (s.has_sim) {
    json js;
    js["dt"] = s.sim.dt;
    js["t_end"] = s.sim.t_end;
    js["integrator"] =
        s.sim.integrator == Integrator::RK4 ? "rk4" : "euler";
    js["representation"] =
        s.sim.representation == Representation::FullState ? "full_state"
                                                          : "shape";
    js["record_every"] = s.sim.record_every;
    if (!s.sim.events.empty()) {
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
      js["events"] = std::move(events);
    }
    root["sim"] = std::move(js);
  }
  if (s.has_seed) root["seed"] = s.seed;
  if (!s.sweep.empty()) {
    json axes = json::array();
    for (const SweepAxis& ax : s.sweep)
      axes.push_back({{"param", ax.param},
                      {"lo", ax.lo},
                      {"hi", ax.hi},
                      {"count", ax.count}});
    root["sweep"] = {{"axes", std::move(axes)}};
  }
  return root.dump(2) + "\n";
}

}  // namespace bcp
