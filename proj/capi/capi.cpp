#include "chemoflow.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "chemoflow/errors.hpp"
#include "chemoflow/run.hpp"

namespace {

thread_local std::string g_last_error;

chf_status set_error(chf_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

/// Maps C++ exceptions onto status codes at the ABI boundary.
template <typename Fn>
chf_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const chemoflow::ConfigError& e) {
    return set_error(CHF_ERR_CONFIG, e.what());
  } catch (const chemoflow::SolverError& e) {
    return set_error(CHF_ERR_SOLVER, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(CHF_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return set_error(CHF_ERR_SOLVER, e.what());
  }
}

}  // namespace

struct chf_config {
  chemoflow::RunConfig cfg;
};

extern "C" {

chf_status chf_config_load(const char* path, chf_config** out) {
  if (!path || !out) return set_error(CHF_ERR_CONFIG, "null argument");
  *out = nullptr;
  return guarded([&]() {
    auto* handle = new chf_config{chemoflow::parse_config_file(path)};
    *out = handle;
    return CHF_OK;
  });
}

chf_status chf_config_parse(const char* json_text, chf_config** out) {
  if (!json_text || !out) return set_error(CHF_ERR_CONFIG, "null argument");
  *out = nullptr;
  return guarded([&]() {
    auto* handle = new chf_config{chemoflow::parse_config_text(json_text)};
    *out = handle;
    return CHF_OK;
  });
}

void chf_config_free(chf_config* cfg) { delete cfg; }

chf_status chf_config_set_output_dir(chf_config* cfg, const char* dir) {
  if (!cfg || !dir) return set_error(CHF_ERR_CONFIG, "null argument");
  cfg->cfg.output_directory = dir;
  return CHF_OK;
}

const char* chf_config_output_dir(const chf_config* cfg) {
  return cfg ? cfg->cfg.output_directory.c_str() : nullptr;
}

chf_status chf_simulate(const chf_config* cfg) {
  if (!cfg) return set_error(CHF_ERR_CONFIG, "null config");
  return guarded([&]() {
    chemoflow::simulate_run(cfg->cfg, cfg->cfg.output_directory);
    return CHF_OK;
  });
}

chf_status chf_stationary(const chf_config* cfg) {
  if (!cfg) return set_error(CHF_ERR_CONFIG, "null config");
  return guarded([&]() {
    chemoflow::stationary_run(cfg->cfg, cfg->cfg.output_directory);
    return CHF_OK;
  });
}

chf_status chf_kernels_verify(char** json_out) {
  if (!json_out) return set_error(CHF_ERR_CONFIG, "null argument");
  *json_out = nullptr;
  return guarded([&]() {
    bool all_pass = false;
    const std::string text = chemoflow::kernels_verify_json(&all_pass);
    *json_out = static_cast<char*>(std::malloc(text.size() + 1));
    if (*json_out) std::memcpy(*json_out, text.c_str(), text.size() + 1);
    if (!all_pass) return set_error(CHF_ERR_CHECK, "one or more kernel checks failed");
    return CHF_OK;
  });
}

chf_status chf_sweep(const chf_config* cfg, const char* param, const double* values,
                     size_t n_values) {
  if (!cfg || !param || (!values && n_values > 0))
    return set_error(CHF_ERR_CONFIG, "null argument");
  return guarded([&]() {
    const std::vector<double> vals(values, values + n_values);
    const auto result =
        chemoflow::sweep_run(cfg->cfg, param, vals, cfg->cfg.output_directory);
    if (!result.all_ok()) return set_error(CHF_ERR_CHECK, "one or more sweep runs failed");
    return CHF_OK;
  });
}

const char* chf_last_error(void) { return g_last_error.c_str(); }

void chf_string_free(char* s) { std::free(s); }

}  // extern "C"
