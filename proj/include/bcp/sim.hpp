#pragma once

#include <string>
#include <variant>
#include <vector>

#include "bcp/equilibria.hpp"
#include "bcp/types.hpp"

namespace bcp {

enum class Integrator { RK4, Euler };
enum class Representation { FullState, Shape };

// Instantaneous heading jump of one agent.
struct HeadingKick {
  int agent = 0;       // 0-based
  double delta = 0.0;  // [rad]
};

// Beacon relocation.
struct BeaconMove {
  Vec2 position;
};

struct Event {
  double time = 0.0;  // [s]
  std::variant<HeadingKick, BeaconMove> action;
};

struct SimConfig {
  double dt = 1e-3;    // fixed step [s]
  double t_end = 0.0;  // [s]
  Integrator integrator = Integrator::RK4;
  Representation representation = Representation::FullState;
  std::vector<Event> events;  // strictly increasing times
  int record_every = 100;     // record every k-th lattice tick

  // Events require the full-state representation (a heading kick or beacon
  // move is not expressible on the quotient).
  void validate() const;
};

// Recorded trajectory. Shape samples are always present (extracted from the
// world state on full-state runs); world samples only on full-state runs.
// When the flow reaches degenerate geometry or leaves the finite range the
// run stops at the last good sample and `aborted` is set.
struct Trajectory {
  Representation representation = Representation::FullState;
  int n = 0;
  std::vector<double> times;
  std::vector<WorldState> world;
  std::vector<ShapeState> shape;
  std::vector<double> event_times;  // copied from the driving config
  bool aborted = false;
  double abort_time = 0.0;
  std::string abort_reason;

  // Beacon distance per sample and agent.
  std::vector<std::vector<double>> beacon_distance_series() const;
  // Beacon angle from agent i to agent i+1 per sample, in [0, 2pi).
  std::vector<std::vector<double>> spacing_series() const;
};

// Fixed-step integration of the full Cartesian state. Integration steps land
// exactly on event times; an event applies after the sample at its time is
// recorded. Deterministic for fixed inputs.
Trajectory integrate(const WorldState& init, const ControlParams& p,
                     const SimConfig& cfg);

// The same driver on the shape vector field (symmetric params, no events).
Trajectory integrate_shape(const ShapeState& init, const ControlParams& p,
                           const SimConfig& cfg);

// Relative half-width of the settling band around the target radius.
inline constexpr double kSettleBand = 0.01;

struct SegmentMetrics {
  double t_start = 0.0;
  double t_end = 0.0;
  bool settled = false;
  double settling_time = 0.0;  // absolute time, valid when settled
};

struct ConvergenceMetrics {
  bool settled = false;             // final segment settled
  double settling_time = 0.0;       // of the final segment
  double final_radius_error = 0.0;  // max_i |rho_b_i - rho_b*| at the end [m]
  double final_spacing_error = 0.0;  // max_i dist(spacing_i, spacing*_i) [rad]
  std::vector<SegmentMetrics> segments;  // delimited by event times
};

// Settling against the target: per segment (between events), the earliest
// recorded time from which max_i |rho_b_i(t) - rho_b*| stays below
// kSettleBand * rho_b* through the segment end.
ConvergenceMetrics convergence_metrics(const Trajectory& traj,
                                       const EquilibriumSpec& target);

// Trajectory CSV: header t,agent,x,y,heading,rho_b,kappa,kappa_b,rho_next;
// one row per agent (1-based ids) per sample plus a beacon row with agent=b
// and empty shape fields. Shape-run rows leave x,y,heading empty. Doubles are
// shortest round-trip decimals.
std::string trajectory_csv(const Trajectory& traj);

// Long-format series for plotting: t,series,agent,value with series rho_b and
// spacing (plus x and y on full-state runs).
std::string plot_data_csv(const Trajectory& traj);

}  // namespace bcp
