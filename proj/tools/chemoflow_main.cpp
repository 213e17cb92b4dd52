// Command-line front end; talks to the solver only through the C API.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chemoflow.h"

namespace {

int status_to_exit(chf_status s) { return static_cast<int>(s); }

void print_error(chf_status s) {
  std::fprintf(stderr, "chemoflow: %s (status %d)\n", chf_last_error(), int(s));
}

/// CHEMOFLOW_OUT overrides the config's output directory; an explicit
/// --output beats both.
int apply_output_dir(chf_config* cfg, const std::string& cli_output) {
  std::string dir = cli_output;
  if (dir.empty()) {
    if (const char* env = std::getenv("CHEMOFLOW_OUT")) dir = env;
  }
  if (!dir.empty()) {
    const chf_status s = chf_config_set_output_dir(cfg, dir.c_str());
    if (s != CHF_OK) {
      print_error(s);
      return status_to_exit(s);
    }
  }
  return 0;
}

std::vector<double> parse_value_list(const std::string& csv, bool* ok) {
  std::vector<double> out;
  *ok = true;
  size_t pos = 0;
  while (pos < csv.size()) {
    size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    const std::string token = csv.substr(pos, comma - pos);
    try {
      size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      out.push_back(v);
    } catch (const std::exception&) {
      *ok = false;
      return {};
    }
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chemoflow: coupled drift-diffusion solver and verification suite"};
  app.require_subcommand(1);

  std::string sim_config, sim_output;
  CLI::App* simulate = app.add_subcommand("simulate", "run a trajectory from a JSON config");
  simulate->add_option("config", sim_config, "path to the JSON config")->required();
  simulate->add_option("--output", sim_output, "output directory override");

  std::string stat_config, stat_output;
  CLI::App* stationary = app.add_subcommand("stationary", "solve the stationary system");
  stationary->add_option("config", stat_config, "path to the JSON config")->required();
  stationary->add_option("--output", stat_output, "output directory override");

  CLI::App* kernels = app.add_subcommand("kernels", "kernel utilities");
  CLI::App* kernels_verify = kernels->add_subcommand("verify", "run the kernel check table");

  std::string sweep_config, sweep_param, sweep_values, sweep_output;
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("config", sweep_config, "path to the JSON config")->required();
  sweep->add_option("--param", sweep_param, "parameter to sweep: epsilon|tau|n")->required();
  sweep->add_option("--values", sweep_values, "comma-separated value list")->required();
  sweep->add_option("--output", sweep_output, "output directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (simulate->parsed()) {
    chf_config* cfg = nullptr;
    chf_status s = chf_config_load(sim_config.c_str(), &cfg);
    if (s != CHF_OK) {
      print_error(s);
      return status_to_exit(s);
    }
    if (const int rc = apply_output_dir(cfg, sim_output)) {
      chf_config_free(cfg);
      return rc;
    }
    s = chf_simulate(cfg);
    if (s != CHF_OK) print_error(s);
    else std::printf("wrote trajectory to %s\n", chf_config_output_dir(cfg));
    chf_config_free(cfg);
    return status_to_exit(s);
  }

  if (stationary->parsed()) {
    chf_config* cfg = nullptr;
    chf_status s = chf_config_load(stat_config.c_str(), &cfg);
    if (s != CHF_OK) {
      print_error(s);
      return status_to_exit(s);
    }
    if (const int rc = apply_output_dir(cfg, stat_output)) {
      chf_config_free(cfg);
      return rc;
    }
    s = chf_stationary(cfg);
    if (s != CHF_OK) print_error(s);
    else std::printf("wrote stationary state to %s\n", chf_config_output_dir(cfg));
    chf_config_free(cfg);
    return status_to_exit(s);
  }

  if (kernels->parsed() && kernels_verify->parsed()) {
    char* json = nullptr;
    const chf_status s = chf_kernels_verify(&json);
    if (json) {
      std::fputs(json, stdout);
      chf_string_free(json);
    }
    if (s != CHF_OK && s != CHF_ERR_CHECK) print_error(s);
    return status_to_exit(s);
  }

  if (sweep->parsed()) {
    bool ok = false;
    const std::vector<double> values = parse_value_list(sweep_values, &ok);
    if (!ok || values.empty()) {
      std::fprintf(stderr, "chemoflow: --values must be a nonempty comma-separated number list\n");
      return 2;
    }
    chf_config* cfg = nullptr;
    chf_status s = chf_config_load(sweep_config.c_str(), &cfg);
    if (s != CHF_OK) {
      print_error(s);
      return status_to_exit(s);
    }
    if (const int rc = apply_output_dir(cfg, sweep_output)) {
      chf_config_free(cfg);
      return rc;
    }
    s = chf_sweep(cfg, sweep_param.c_str(), values.data(), values.size());
    if (s != CHF_OK) print_error(s);
    else std::printf("wrote sweep results to %s\n", chf_config_output_dir(cfg));
    chf_config_free(cfg);
    return status_to_exit(s);
  }

  return 2;
}
