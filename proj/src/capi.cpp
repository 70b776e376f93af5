#include "beacon_pursuit.h"

#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "bcp/errors.hpp"
#include "bcp/runner.hpp"
#include "bcp/scenario.hpp"

struct bcp_scenario {
  bcp::Scenario impl;
};

struct bcp_report {
  std::vector<bcp::Document> docs;
};

namespace {

void write_err(char* err, size_t err_len, const char* msg) {
  if (!err || err_len == 0) return;
  size_t n = std::strlen(msg);
  if (n >= err_len) n = err_len - 1;
  std::memcpy(err, msg, n);
  err[n] = '\0';
}

bcp_status status_of(bcp::ErrorCode code) {
  switch (code) {
    case bcp::ErrorCode::InvalidArgument:
      return BCP_E_INVALID_ARGUMENT;
    case bcp::ErrorCode::Config:
      return BCP_E_CONFIG;
    case bcp::ErrorCode::DegenerateGeometry:
      return BCP_E_DEGENERATE_GEOMETRY;
    case bcp::ErrorCode::AssumptionViolation:
      return BCP_E_ASSUMPTION;
    case bcp::ErrorCode::DegenerateFamily:
      return BCP_E_DEGENERATE_FAMILY;
    case bcp::ErrorCode::NoSuchEquilibrium:
      return BCP_E_NO_SUCH_EQUILIBRIUM;
    case bcp::ErrorCode::InconsistentShape:
      return BCP_E_INCONSISTENT_SHAPE;
    case bcp::ErrorCode::IllConditioned:
      return BCP_E_ILL_CONDITIONED;
    case bcp::ErrorCode::Numeric:
      return BCP_E_NUMERIC;
    case bcp::ErrorCode::Io:
      return BCP_E_IO;
  }
  return BCP_E_NUMERIC;
}

template <typename Fn>
bcp_status guarded(char* err, size_t err_len, Fn&& fn) {
  try {
    fn();
    return BCP_OK;
  } catch (const bcp::Error& e) {
    write_err(err, err_len, e.what());
    return status_of(e.code());
  } catch (const std::exception& e) {
    write_err(err, err_len, e.what());
    return BCP_E_NUMERIC;
  } catch (...) {
    write_err(err, err_len, "unknown error");
    return BCP_E_NUMERIC;
  }
}

bcp_status run_guarded(const bcp_scenario* s, bcp_report** out, char* err,
                       size_t err_len,
                       std::vector<bcp::Document> (*run)(const bcp::Scenario&)) {
  if (!s || !out) {
    write_err(err, err_len, "null argument");
    return BCP_E_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(err, err_len,
                 [&] { *out = new bcp_report{run(s->impl)}; });
}

}  // namespace

extern "C" {

const char* bcp_version(void) { return "1.0.0"; }

const char* bcp_status_name(bcp_status s) {
  switch (s) {
    case BCP_OK:
      return "ok";
    case BCP_E_INVALID_ARGUMENT:
      return "invalid_argument";
    case BCP_E_CONFIG:
      return "config";
    case BCP_E_DEGENERATE_GEOMETRY:
      return "degenerate_geometry";
    case BCP_E_ASSUMPTION:
      return "assumption_violation";
    case BCP_E_DEGENERATE_FAMILY:
      return "degenerate_family";
    case BCP_E_NO_SUCH_EQUILIBRIUM:
      return "no_such_equilibrium";
    case BCP_E_INCONSISTENT_SHAPE:
      return "inconsistent_shape";
    case BCP_E_ILL_CONDITIONED:
      return "ill_conditioned";
    case BCP_E_NUMERIC:
      return "numeric";
    case BCP_E_IO:
      return "io";
  }
  return "unknown";
}

bcp_status bcp_scenario_parse(const char* json_text, bcp_scenario** out,
                              char* err, size_t err_len) {
  if (!json_text || !out) {
    write_err(err, err_len, "null argument");
    return BCP_E_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(err, err_len, [&] {
    *out = new bcp_scenario{bcp::parse_scenario(json_text)};
  });
}

bcp_status bcp_scenario_load(const char* path, bcp_scenario** out, char* err,
                             size_t err_len) {
  if (!path || !out) {
    write_err(err, err_len, "null argument");
    return BCP_E_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(err, err_len, [&] {
    *out = new bcp_scenario{bcp::load_scenario(path)};
  });
}

void bcp_scenario_free(bcp_scenario* s) { delete s; }

void bcp_scenario_set_seed(bcp_scenario* s, uint64_t seed) {
  if (!s) return;
  s->impl.seed = seed;
  s->impl.has_seed = true;
}

int bcp_scenario_agents(const bcp_scenario* s) { return s ? s->impl.n : 0; }

bcp_status bcp_run_equilibria(const bcp_scenario* s, bcp_report** out,
                              char* err, size_t err_len) {
  return run_guarded(s, out, err, err_len, &bcp::run_equilibria);
}

bcp_status bcp_run_stability(const bcp_scenario* s, bcp_report** out,
                             char* err, size_t err_len) {
  return run_guarded(s, out, err, err_len, &bcp::run_stability);
}

bcp_status bcp_run_simulation(const bcp_scenario* s, int emit_plot_data,
                              bcp_report** out, char* err, size_t err_len) {
  if (!s || !out) {
    write_err(err, err_len, "null argument");
    return BCP_E_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(err, err_len, [&] {
    *out = new bcp_report{bcp::run_simulation(s->impl, emit_plot_data != 0)};
  });
}

bcp_status bcp_run_sweep(const bcp_scenario* s, int max_threads,
                         bcp_report** out, char* err, size_t err_len) {
  if (!s || !out) {
    write_err(err, err_len, "null argument");
    return BCP_E_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(err, err_len, [&] {
    *out = new bcp_report{bcp::run_sweep(s->impl, max_threads)};
  });
}

size_t bcp_report_count(const bcp_report* r) { return r ? r->docs.size() : 0; }

const char* bcp_report_name(const bcp_report* r, size_t idx) {
  if (!r || idx >= r->docs.size()) return nullptr;
  return r->docs[idx].name.c_str();
}

const char* bcp_report_data(const bcp_report* r, size_t idx) {
  if (!r || idx >= r->docs.size()) return nullptr;
  return r->docs[idx].content.c_str();
}

size_t bcp_report_size(const bcp_report* r, size_t idx) {
  if (!r || idx >= r->docs.size()) return 0;
  return r->docs[idx].content.size();
}

void bcp_report_free(bcp_report* r) { delete r; }

}  // extern "C"
