#pragma once

#include <string>
#include <vector>

#include "bcp/scenario.hpp"

namespace bcp {

// One named output file produced by a run.
struct Document {
  std::string name;
  std::string content;
};

// equilibria.json: enumerated specs with residuals (and two-agent type
// labels where the taxonomy applies) plus the continuum flag.
std::vector<Document> run_equilibria(const Scenario& s);

// stability.json: a report per equilibrium; the analytic polynomial/Routh
// layer for two agents, the numeric spectrum always.
std::vector<Document> run_stability(const Scenario& s);

// trajectory.csv + metrics.json (+ plot_data.csv when emit_plot_data).
std::vector<Document> run_simulation(const Scenario& s, bool emit_plot_data);

// sweep.csv over the configured grid (two agents only). max_threads <= 0
// means hardware concurrency.
std::vector<Document> run_sweep(const Scenario& s, int max_threads);

// Uniform double in [0, 1) from a raw 64-bit draw; fixed mapping so that
// seeded runs are reproducible across platforms.
inline double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace bcp
