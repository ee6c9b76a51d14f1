// SPDX-License-Identifier: Apache-2.0
#include "duoplanck/duoplanck.h"

#include <cstring>
#include <new>
#include <span>
#include <string>

#include "duoplanck/errors.hpp"
#include "duoplanck/runner.hpp"

struct dp_config {
  duoplanck::RunConfig cfg;
  std::string mode;
};

struct dp_result {
  duoplanck::RunSummary summary;
  std::string line;
};

namespace {

thread_local std::string g_last_error;

template <class F>
dp_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return DP_OK;
  } catch (const duoplanck::ConfigError& e) {
    g_last_error = e.what();
    return DP_ERR_CONFIG;
  } catch (const duoplanck::UsageError& e) {
    g_last_error = e.what();
    return DP_ERR_USAGE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DP_ERR_RUNTIME;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DP_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return DP_ERR_RUNTIME;
  }
}

dp_status null_arg(const char* what) {
  g_last_error = std::string(what) + " must not be null";
  return DP_ERR_USAGE;
}

} // namespace

extern "C" {

const char* dp_version(void) { return "0.1.0"; }

const char* dp_last_error(void) { return g_last_error.c_str(); }

dp_status dp_config_parse(const char* text, dp_config** out) {
  if (text == nullptr || out == nullptr) {
    return null_arg("text and out");
  }
  *out = nullptr;
  return guard([&] {
    auto cfg = duoplanck::RunConfig::parse(text);
    const std::string mode = duoplanck::mode_name(cfg.mode());
    *out = new dp_config{std::move(cfg), mode};
  });
}

dp_status dp_config_load(const char* path, dp_config** out) {
  if (path == nullptr || out == nullptr) {
    return null_arg("path and out");
  }
  *out = nullptr;
  return guard([&] {
    auto cfg = duoplanck::RunConfig::load(path);
    const std::string mode = duoplanck::mode_name(cfg.mode());
    *out = new dp_config{std::move(cfg), mode};
  });
}

void dp_config_free(dp_config* cfg) { delete cfg; }

dp_status dp_config_set_seed(dp_config* cfg, uint64_t seed) {
  if (cfg == nullptr) {
    return null_arg("cfg");
  }
  return guard([&] { cfg->cfg.set_seed(seed); });
}

const char* dp_config_mode(const dp_config* cfg) {
  return cfg == nullptr ? "" : cfg->mode.c_str();
}

dp_status dp_config_serialize(const dp_config* cfg, char** out) {
  if (cfg == nullptr || out == nullptr) {
    return null_arg("cfg and out");
  }
  *out = nullptr;
  return guard([&] {
    const std::string s = cfg->cfg.serialize();
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

void dp_string_free(char* s) { delete[] s; }

dp_status dp_run(const dp_config* cfg, const char* out_dir, dp_result** out) {
  if (cfg == nullptr || out_dir == nullptr || out == nullptr) {
    return null_arg("cfg, out_dir and out");
  }
  *out = nullptr;
  return guard([&] {
    auto summary = duoplanck::execute(cfg->cfg, out_dir);
    std::string line = duoplanck::summary_line(summary);
    *out = new dp_result{std::move(summary), std::move(line)};
  });
}

void dp_result_free(dp_result* r) { delete r; }

const char* dp_result_mode(const dp_result* r) {
  return r == nullptr ? "" : r->summary.mode.c_str();
}
int64_t dp_result_steps(const dp_result* r) { return r == nullptr ? 0 : r->summary.steps; }
double dp_result_final_trace(const dp_result* r) {
  return r == nullptr ? 0.0 : r->summary.final_trace;
}
double dp_result_final_min_eig(const dp_result* r) {
  return r == nullptr ? 0.0 : r->summary.final_min_eig;
}
double dp_result_wall_time(const dp_result* r) {
  return r == nullptr ? 0.0 : r->summary.wall_time_s;
}
const char* dp_result_summary(const dp_result* r) {
  return r == nullptr ? "" : r->line.c_str();
}

dp_status dp_check_kernel(double G, double hbar, const double* k, size_t n,
                          double* max_rel_error) {
  if (k == nullptr || max_rel_error == nullptr) {
    return null_arg("k and max_rel_error");
  }
  return guard([&] {
    *max_rel_error = duoplanck::verify_kernel_constraint(std::span<const double>(k, n), G, hbar);
  });
}

} // extern "C"
