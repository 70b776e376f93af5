#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "beacon_pursuit.h"

namespace fs = std::filesystem;

namespace {

// Config and usage problems exit 2; failures during a run exit 3.
int exit_code_for(bcp_status rc, bool during_run) {
  if (!during_run) return 2;
  return (rc == BCP_E_CONFIG || rc == BCP_E_INVALID_ARGUMENT) ? 2 : 3;
}

int write_reports(const bcp_report* report, const fs::path& out_dir,
                  bool force) {
  size_t count = bcp_report_count(report);
  for (size_t i = 0; i < count; ++i) {
    fs::path target = out_dir / bcp_report_name(report, i);
    if (fs::exists(target) && !force) {
      std::cerr << "error: " << target.string()
                << " exists (use --force to overwrite)\n";
      return 2;
    }
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << out_dir.string() << ": "
              << ec.message() << "\n";
    return 3;
  }
  for (size_t i = 0; i < count; ++i) {
    fs::path target = out_dir / bcp_report_name(report, i);
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    out.write(bcp_report_data(report, i),
              static_cast<std::streamsize>(bcp_report_size(report, i)));
    if (!out) {
      std::cerr << "error: cannot write " << target.string() << "\n";
      return 3;
    }
    std::cout << "wrote " << target.string() << "\n";
  }
  return 0;
}

bool parse_threads_env(const char* text, int* out) {
  std::string s(text);
  if (s.empty() || s.size() > 9) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  int v = std::atoi(s.c_str());
  if (v < 1) return false;
  *out = v;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beacon-referenced cyclic pursuit toolkit"};
  app.set_version_flag("--version", bcp_version());
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = "out";
  bool force = false;
  bool emit_plot_data = false;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "scenario JSON file")->required();
    sub->add_option("--out", out_dir, "output directory (default: out)");
    sub->add_flag("--force", force, "overwrite existing output files");
    sub->add_option("--seed", seed,
                    "override the scenario seed (random/perturbed inits)");
  };

  CLI::App* cmd_equilibria =
      app.add_subcommand("equilibria", "enumerate circling equilibria");
  add_common(cmd_equilibria);
  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "integrate the configured scenario");
  add_common(cmd_simulate);
  cmd_simulate->add_flag("--emit-plot-data", emit_plot_data,
                         "also write long-format plot series");
  CLI::App* cmd_stability =
      app.add_subcommand("stability", "classify the circling equilibria");
  add_common(cmd_stability);
  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "grid sweep of the two-agent taxonomy");
  add_common(cmd_sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  int threads = 0;
  if (const char* env = std::getenv("BPL_THREADS")) {
    if (!parse_threads_env(env, &threads)) {
      std::cerr << "error: BPL_THREADS must be a positive integer\n";
      return 2;
    }
  }

  char err[1024] = {0};
  bcp_scenario* scenario = nullptr;
  bcp_status rc = bcp_scenario_load(config.c_str(), &scenario, err, sizeof err);
  if (rc != BCP_OK) {
    std::cerr << "error: " << err << "\n";
    return exit_code_for(rc, false);
  }
  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed") > 0) bcp_scenario_set_seed(scenario, seed);

  bcp_report* report = nullptr;
  if (sub == cmd_equilibria)
    rc = bcp_run_equilibria(scenario, &report, err, sizeof err);
  else if (sub == cmd_simulate)
    rc = bcp_run_simulation(scenario, emit_plot_data ? 1 : 0, &report, err,
                            sizeof err);
  else if (sub == cmd_stability)
    rc = bcp_run_stability(scenario, &report, err, sizeof err);
  else
    rc = bcp_run_sweep(scenario, threads, &report, err, sizeof err);

  int code = 0;
  if (rc != BCP_OK) {
    std::cerr << "error: " << err << " [" << bcp_status_name(rc) << "]\n";
    code = exit_code_for(rc, true);
  } else {
    code = write_reports(report, out_dir, force);
  }
  bcp_report_free(report);
  bcp_scenario_free(scenario);
  return code;
}
