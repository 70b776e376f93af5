#include "bcp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>

#include "bcp/errors.hpp"
#include "bcp/format.hpp"
#include "bcp/frenet.hpp"
#include "bcp/shape.hpp"

namespace bcp {

namespace {

// Matching tolerance for event times against lattice ticks [s].
constexpr double kTimeTol = 1e-9;

using Deriv = std::function<void(const std::vector<double>&,
                                 std::vector<double>&)>;

struct Stepper {
  Integrator method;
  std::vector<double> k1, k2, k3, k4, tmp;

  explicit Stepper(Integrator m, size_t dim)
      : method(m), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim) {}

  void advance(std::vector<double>& x, double h, const Deriv& f) {
    size_t dim = x.size();
    f(x, k1);
    if (method == Integrator::Euler) {
      for (size_t i = 0; i < dim; ++i) x[i] += h * k1[i];
      return;
    }
    for (size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    f(tmp, k2);
    for (size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    f(tmp, k3);
    for (size_t i = 0; i < dim; ++i) tmp[i] = x[i] + h * k3[i];
    f(tmp, k4);
    for (size_t i = 0; i < dim; ++i)
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
};

bool all_finite(const std::vector<double>& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

// Shared fixed-lattice driver. Callbacks: f (derivative), wrap (normalize
// angles after a full tick), record (sample the state at time t), apply
// (event application; null for shape runs).
struct Driver {
  const SimConfig& cfg;
  double t0;
  long long ticks;

  Driver(const SimConfig& c, double start) : cfg(c), t0(start) {
    double total = cfg.t_end - t0;
    if (!(total > 0.0))
      fail(ErrorCode::InvalidArgument, "t_end must exceed the start time");
    long long k = std::llround(total / cfg.dt);
    if (k >= 1 &&
        std::fabs(static_cast<double>(k) * cfg.dt - total) <=
            kTimeTol * std::max(1.0, total))
      ticks = k;
    else
      ticks = static_cast<long long>(std::ceil(total / cfg.dt - 1e-12));
  }

  double tick_time(long long k) const {
    return k >= ticks ? cfg.t_end : t0 + static_cast<double>(k) * cfg.dt;
  }

  // Returns false when the run aborted.
  bool run(std::vector<double>& x, const Deriv& f,
           const std::function<void(std::vector<double>&)>& wrap,
           const std::function<void(double, const std::vector<double>&)>&
               record,
           const std::function<void(const Event&, std::vector<double>&)>&
               apply,
           Trajectory* traj) {
    Stepper stepper(cfg.integrator, x.size());
    size_t ev = 0;
    auto catch_up = [&](double t) {
      while (ev < cfg.events.size() && cfg.events[ev].time <= t + kTimeTol) {
        if (apply) apply(cfg.events[ev], x);
        ++ev;
      }
    };

    record(t0, x);
    catch_up(t0);

    std::vector<double> x_prev;
    double t_cur = t0;
    for (long long k = 1; k <= ticks; ++k) {
      double t_next = tick_time(k);
      x_prev = x;
      double t_prev = t_cur;
      bool ok = true;
      std::string reason;
      try {
        // Sub-step to land exactly on event times inside this tick.
        while (ev < cfg.events.size() &&
               cfg.events[ev].time < t_next - kTimeTol) {
          double te = cfg.events[ev].time;
          stepper.advance(x, te - t_cur, f);
          t_cur = te;
          catch_up(t_cur);
        }
        stepper.advance(x, t_next - t_cur, f);
        t_cur = t_next;
        if (!all_finite(x)) {
          ok = false;
          reason = "state left the finite range";
        } else {
          wrap(x);
          if (k % cfg.record_every == 0 || k == ticks) record(t_cur, x);
        }
      } catch (const Error& e) {
        ok = false;
        reason = e.what();
      }
      if (!ok) {
        traj->aborted = true;
        traj->abort_time = t_prev;
        traj->abort_reason = reason;
        if (traj->times.empty() || traj->times.back() < t_prev - kTimeTol) {
          try {
            record(t_prev, x_prev);
          } catch (const Error&) {
            // The last good state cannot be sampled; keep what is recorded.
          }
        }
        return false;
      }
      catch_up(t_cur);
    }
    return true;
  }
};

void validate_events_in_range(const SimConfig& cfg, double t0, int n) {
  for (const Event& e : cfg.events) {
    if (e.time < t0 - kTimeTol || e.time >= cfg.t_end)
      fail(ErrorCode::InvalidArgument,
           "event time " + format_double(e.time) +
               " outside the simulated interval");
    if (const auto* kick = std::get_if<HeadingKick>(&e.action))
      if (kick->agent < 0 || kick->agent >= n)
        fail(ErrorCode::InvalidArgument, "event agent index out of range");
  }
}

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    fail(ErrorCode::InvalidArgument, "dt must be positive");
  if (!std::isfinite(t_end))
    fail(ErrorCode::InvalidArgument, "t_end must be finite");
  if (record_every < 1)
    fail(ErrorCode::InvalidArgument, "record_every must be >= 1");
  if (!events.empty() && representation != Representation::FullState)
    fail(ErrorCode::InvalidArgument,
         "events require the full-state representation");
  double prev = -std::numeric_limits<double>::infinity();
  for (const Event& e : events) {
    if (!std::isfinite(e.time))
      fail(ErrorCode::InvalidArgument, "event times must be finite");
    if (!(e.time > prev))
      fail(ErrorCode::InvalidArgument,
           "event times must be strictly increasing");
    prev = e.time;
    if (const auto* kick = std::get_if<HeadingKick>(&e.action)) {
      if (!std::isfinite(kick->delta))
        fail(ErrorCode::InvalidArgument, "heading kick must be finite");
    } else if (const auto* move = std::get_if<BeaconMove>(&e.action)) {
      if (!std::isfinite(move->position.x) || !std::isfinite(move->position.y))
        fail(ErrorCode::InvalidArgument, "beacon target must be finite");
    }
  }
}

Trajectory integrate(const WorldState& init, const ControlParams& p,
                     const SimConfig& cfg) {
  init.validate();
  int n = init.n();
  p.validate(n);
  cfg.validate();
  if (cfg.representation != Representation::FullState)
    fail(ErrorCode::InvalidArgument,
         "integrate() drives the full-state representation");
  validate_events_in_range(cfg, init.time, n);

  Trajectory traj;
  traj.representation = Representation::FullState;
  traj.n = n;
  for (const Event& e : cfg.events) traj.event_times.push_back(e.time);

  // Integrated variables: [x, y, heading] per agent. Beacon and speeds live
  // beside them (events may move the beacon).
  WorldState work = init;
  std::vector<double> x(3 * n);
  auto store = [&](const WorldState& w, std::vector<double>& out) {
    for (int i = 0; i < n; ++i) {
      out[3 * i] = w.agents[i].position.x;
      out[3 * i + 1] = w.agents[i].position.y;
      out[3 * i + 2] = w.agents[i].heading;
    }
  };
  auto load = [&](const std::vector<double>& in, WorldState& w) {
    for (int i = 0; i < n; ++i) {
      w.agents[i].position = {in[3 * i], in[3 * i + 1]};
      w.agents[i].heading = in[3 * i + 2];
    }
  };
  store(init, x);

  WorldState scratch = init;
  Deriv f = [&](const std::vector<double>& state, std::vector<double>& out) {
    load(state, scratch);
    WorldRates r = full_state_derivative(scratch, p);
    for (int i = 0; i < n; ++i) {
      out[3 * i] = r.velocity[i].x;
      out[3 * i + 1] = r.velocity[i].y;
      out[3 * i + 2] = r.heading_rate[i];
    }
  };
  auto wrap = [&](std::vector<double>& state) {
    for (int i = 0; i < n; ++i)
      state[3 * i + 2] = wrap_angle(state[3 * i + 2]);
  };
  auto record = [&](double t, const std::vector<double>& state) {
    load(state, work);
    work.time = t;
    for (int i = 0; i < n; ++i)
      work.agents[i].heading = wrap_angle(work.agents[i].heading);
    ShapeState sh = extract_shape(work);
    traj.times.push_back(t);
    traj.world.push_back(work);
    traj.shape.push_back(std::move(sh));
  };
  auto apply = [&](const Event& e, std::vector<double>& state) {
    if (const auto* kick = std::get_if<HeadingKick>(&e.action)) {
      state[3 * kick->agent + 2] =
          wrap_angle(state[3 * kick->agent + 2] + kick->delta);
    } else if (const auto* move = std::get_if<BeaconMove>(&e.action)) {
      work.beacon = move->position;
      scratch.beacon = move->position;
    }
  };

  Driver driver(cfg, init.time);
  driver.run(x, f, wrap, record, apply, &traj);
  return traj;
}

Trajectory integrate_shape(const ShapeState& init, const ControlParams& p,
                           const SimConfig& cfg) {
  init.validate();
  int n = init.n();
  p.validate(n);
  cfg.validate();
  if (cfg.representation != Representation::Shape)
    fail(ErrorCode::InvalidArgument,
         "integrate_shape() drives the shape representation");
  if (!cfg.events.empty())
    fail(ErrorCode::InvalidArgument,
         "events require the full-state representation");

  Trajectory traj;
  traj.representation = Representation::Shape;
  traj.n = n;

  std::vector<double> x(5 * n);
  auto store = [&](const ShapeState& s, std::vector<double>& out) {
    for (int i = 0; i < n; ++i) {
      out[i] = s.rho[i];
      out[n + i] = s.kappa[i];
      out[2 * n + i] = s.theta[i];
      out[3 * n + i] = s.rho_b[i];
      out[4 * n + i] = s.kappa_b[i];
    }
  };
  ShapeState scratch = init;
  auto load = [&](const std::vector<double>& in, ShapeState& s) {
    for (int i = 0; i < n; ++i) {
      s.rho[i] = in[i];
      s.kappa[i] = in[n + i];
      s.theta[i] = in[2 * n + i];
      s.rho_b[i] = in[3 * n + i];
      s.kappa_b[i] = in[4 * n + i];
    }
  };
  store(init, x);

  Deriv f = [&](const std::vector<double>& state, std::vector<double>& out) {
    load(state, scratch);
    ShapeRates r = shape_derivative(scratch, p);
    for (int i = 0; i < n; ++i) {
      out[i] = r.rho[i];
      out[n + i] = r.kappa[i];
      out[2 * n + i] = r.theta[i];
      out[3 * n + i] = r.rho_b[i];
      out[4 * n + i] = r.kappa_b[i];
    }
  };
  auto wrap = [&](std::vector<double>& state) {
    for (int i = 0; i < n; ++i) {
      state[n + i] = wrap_angle(state[n + i]);
      state[2 * n + i] = wrap_angle(state[2 * n + i]);
      state[4 * n + i] = wrap_angle(state[4 * n + i]);
    }
  };
  auto record = [&](double t, const std::vector<double>& state) {
    load(state, scratch);
    scratch.time = t;
    for (int i = 0; i < n; ++i) {
      scratch.kappa[i] = wrap_angle(scratch.kappa[i]);
      scratch.theta[i] = wrap_angle(scratch.theta[i]);
      scratch.kappa_b[i] = wrap_angle(scratch.kappa_b[i]);
    }
    traj.times.push_back(t);
    traj.shape.push_back(scratch);
  };

  Driver driver(cfg, init.time);
  driver.run(x, f, wrap, record, nullptr, &traj);
  return traj;
}

std::vector<std::vector<double>> Trajectory::beacon_distance_series() const {
  std::vector<std::vector<double>> out;
  out.reserve(shape.size());
  for (const ShapeState& s : shape) out.push_back(s.rho_b);
  return out;
}

std::vector<std::vector<double>> Trajectory::spacing_series() const {
  // Beacon angle increment toward the next agent, from shape data alone:
  // spacing_i = arg(rho_b_i - rho_i * e^{j(kappa_i - kappa_b_i)}).
  std::vector<std::vector<double>> out;
  out.reserve(shape.size());
  for (const ShapeState& s : shape) {
    std::vector<double> row(s.n());
    for (int i = 0; i < s.n(); ++i) {
      std::complex<double> z =
          s.rho_b[i] - s.rho[i] * std::exp(std::complex<double>(
                                       0.0, s.kappa[i] - s.kappa_b[i]));
      row[i] = wrap_two_pi(std::arg(z));
    }
    out.push_back(std::move(row));
  }
  return out;
}

ConvergenceMetrics convergence_metrics(const Trajectory& traj,
                                       const EquilibriumSpec& target) {
  if (!(target.rho_b > 0.0))
    fail(ErrorCode::InvalidArgument, "target radius must be positive");
  if (target.n() != traj.n)
    fail(ErrorCode::InvalidArgument, "target size does not match trajectory");
  ConvergenceMetrics out;
  if (traj.times.empty()) return out;

  size_t count = traj.times.size();
  std::vector<double> radius_err(count);
  for (size_t k = 0; k < count; ++k) {
    double worst = 0.0;
    for (double rb : traj.shape[k].rho_b)
      worst = std::max(worst, std::fabs(rb - target.rho_b));
    radius_err[k] = worst;
  }
  double band = kSettleBand * target.rho_b;

  // Segment boundaries: start, each event time inside the run, end.
  std::vector<double> bounds{traj.times.front()};
  for (double te : traj.event_times)
    if (te > traj.times.front() && te < traj.times.back()) bounds.push_back(te);
  bounds.push_back(traj.times.back());

  size_t lo = 0;
  for (size_t b = 0; b + 1 < bounds.size(); ++b) {
    // Samples at the event time itself are pre-event: include them here.
    size_t hi = lo;
    while (hi < count && traj.times[hi] <= bounds[b + 1] + kTimeTol) ++hi;
    SegmentMetrics seg;
    seg.t_start = bounds[b];
    seg.t_end = bounds[b + 1];
    // Earliest sample from which the radius error stays inside the band.
    size_t settle = hi;
    for (size_t k = hi; k-- > lo;) {
      if (radius_err[k] >= band) break;
      settle = k;
    }
    seg.settled = settle < hi;
    if (seg.settled) seg.settling_time = traj.times[settle];
    out.segments.push_back(seg);
    lo = hi;
  }

  if (!out.segments.empty()) {
    out.settled = out.segments.back().settled;
    out.settling_time = out.segments.back().settling_time;
  }
  out.final_radius_error = radius_err.back();
  auto spacings = traj.spacing_series();
  double worst = 0.0;
  for (int i = 0; i < traj.n; ++i)
    worst =
        std::max(worst, angle_dist(spacings.back()[i], target.spacing[i]));
  out.final_spacing_error = worst;
  return out;
}

namespace {

void append_row(std::string* out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const std::string& c : cells) {
    if (!first) out->push_back(',');
    out->append(c);
    first = false;
  }
  out->push_back('\n');
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,agent,x,y,heading,rho_b,kappa,kappa_b,rho_next\n";
  bool full = traj.representation == Representation::FullState;
  for (size_t k = 0; k < traj.times.size(); ++k) {
    std::string t = format_double(traj.times[k]);
    const ShapeState& s = traj.shape[k];
    for (int i = 0; i < traj.n; ++i) {
      std::string x, y, h;
      if (full) {
        const AgentState& a = traj.world[k].agents[i];
        x = format_double(a.position.x);
        y = format_double(a.position.y);
        h = format_double(a.heading);
      }
      append_row(&out, {t, std::to_string(i + 1), x, y, h,
                        format_double(s.rho_b[i]), format_double(s.kappa[i]),
                        format_double(s.kappa_b[i]), format_double(s.rho[i])});
    }
    std::string bx, by;
    if (full) {
      bx = format_double(traj.world[k].beacon.x);
      by = format_double(traj.world[k].beacon.y);
    }
    append_row(&out, {t, "b", bx, by, "", "", "", "", ""});
  }
  return out;
}

std::string plot_data_csv(const Trajectory& traj) {
  std::string out = "t,series,agent,value\n";
  bool full = traj.representation == Representation::FullState;
  auto spacings = traj.spacing_series();
  for (size_t k = 0; k < traj.times.size(); ++k) {
    std::string t = format_double(traj.times[k]);
    const ShapeState& s = traj.shape[k];
    if (full) {
      for (int i = 0; i < traj.n; ++i)
        append_row(&out, {t, "x", std::to_string(i + 1),
                          format_double(traj.world[k].agents[i].position.x)});
      for (int i = 0; i < traj.n; ++i)
        append_row(&out, {t, "y", std::to_string(i + 1),
                          format_double(traj.world[k].agents[i].position.y)});
    }
    for (int i = 0; i < traj.n; ++i)
      append_row(&out, {t, "rho_b", std::to_string(i + 1),
                        format_double(s.rho_b[i])});
    for (int i = 0; i < traj.n; ++i)
      append_row(&out,
                 {t, "spacing", std::to_string(i + 1),
                  format_double(spacings[k][i])});
  }
  return out;
}

}  // namespace bcp
