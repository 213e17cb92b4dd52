#pragma once

#include <string>
#include <vector>

#include "chemoflow/diagnostics.hpp"
#include "chemoflow/jko.hpp"
#include "chemoflow/model.hpp"
#include "chemoflow/stationary.hpp"

namespace chemoflow {

struct GaussianComponent {
  double weight;
  double mean;
  double sigma;
};

struct InitialSpec {
  // u: gaussian mixture (weights must sum to 1)
  std::vector<GaussianComponent> u_mixture;
  // v: "zero" | "gaussian" | "hat"
  std::string v_kind = "zero";
  double v_amplitude = 0.0;
  double v_mean = 0.0;
  double v_sigma = 1.0;
  double v_width = 1.0;  // hat half-width
};

/// Batch-run configuration; parsed from JSON with unknown keys rejected.
struct RunConfig {
  double grid_R = 6.0;
  int grid_n = 600;
  double epsilon = 0.0;
  double kappa = 1.0;
  std::string phi = "rational";  // "linear" | "log" | "rational"
  double lambda0 = 1.0;
  double potential_center = 0.0;
  InitialSpec initial;
  double tau = 0.01;
  double t_end = 1.0;
  std::string output_directory = ".";
  int every_k_steps = 1;

  ModelParams make_params() const;
  Grid1D make_grid() const;
  SystemState make_initial_state() const;
};

/// Parses and validates; throws ConfigError with the offending field path.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& json_text);

/// Runs stationary solve + trajectory, writes trajectory.csv, final_state.csv
/// and report.json into out_dir.  Returns the record.
TrajectoryRecord simulate_run(const RunConfig& cfg, const std::string& out_dir);

/// Solves the stationary system, writes stationary.csv and
/// stationary_report.json into out_dir.
StationaryResult stationary_run(const RunConfig& cfg, const std::string& out_dir);

struct SweepResult {
  std::vector<double> values;
  std::vector<double> fitted_rates;
  std::vector<double> max_residuals;
  std::vector<bool> ok;
  bool all_ok() const;
};

/// One simulate run per value of the swept parameter ("epsilon", "tau" or
/// "n"), each in its own subdirectory, plus sweep_summary.csv.
SweepResult sweep_run(const RunConfig& base, const std::string& param,
                      const std::vector<double>& values, const std::string& out_dir);

/// JSON table of the kernel verification suite.
std::string kernels_verify_json(bool* all_pass);

/// 17-significant-digit formatting used by every CSV/JSON writer.
std::string format_g17(double x);

}  // namespace chemoflow
