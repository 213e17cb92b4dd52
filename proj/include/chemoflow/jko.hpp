#pragma once

#include <optional>
#include <vector>

#include "chemoflow/entropy.hpp"
#include "chemoflow/model.hpp"
#include "chemoflow/state.hpp"
#include "chemoflow/transport.hpp"

namespace chemoflow {

struct JkoConfig {
  double tau = 0.01;           // time step
  double inner_tol = 1e-9;     // compound-distance change per sweep, scaled by (1 + dist)
  int max_sweeps = 200;
  int quantile_m = 0;          // 0 = use n_cells
  double u_floor = kDensityFloor;

  void validate() const;
};

/// Signal update: minimizer of v -> ||v - vt||^2/(2 tau) + F(v) + eps int u phi(v)
/// by damped Newton; the first-order condition
///   (I/tau - Lap_h + kappa) v + eps u phi'(v) - vt/tau = 0
/// is solved to residual <= 1e-10.
ConcentrationField v_block(const ConcentrationField& v_tilde, const ProbabilityDensity& u,
                           const ModelParams& p, double tau);

/// Mass update: projected Newton over monotone quantile vectors on
///   sum_j [ (X_j - Xt_j)^2/(2 tau) + V(X_j) ] / m + internal energy,
/// followed by a descent stage in density space that only accepts candidates
/// lowering the penalized grid energy
///   G(u) = W2^2(u, u_prev)/(2 tau) + int( u^2/2 + u V ),
/// so the recorded energy is non-increasing and the stationary profile is a
/// fixed point to machine precision.
ProbabilityDensity u_block(const ProbabilityDensity& u_tilde, const ConcentrationField& v,
                           const ModelParams& p, double tau,
                           const JkoConfig& cfg = JkoConfig{});

struct StepStats {
  int sweeps = 0;
  double last_change = 0.0;
  bool converged = true;
};

/// One minimizing-movement step by alternating block minimization.  Every
/// accepted move decreases the penalized energy, hence
/// H(out) + dist(out, prev)^2/(2 tau) <= H(prev).
SystemState jko_step(const SystemState& prev, const ModelParams& p, const JkoConfig& cfg,
                     const std::optional<SystemState>& stationary = std::nullopt,
                     StepStats* stats = nullptr);

/// Per-step diagnostics of a trajectory.
struct TrajectoryStep {
  double time;
  double H;
  double l_u, l_v, l_star;
  double w2_step;        // W2(u_n, u_{n-1})
  double dv_l2_step;     // ||v_n - v_{n-1}||
  double d_u, d_v;       // dissipation values at the new state
  double w2_to_stationary;
  double u_l2_diff;      // ||u_n - u_inf||
  double v_w12_diff;     // ||v_n - v_inf||_{W^{1,2}}
  double grad_v_l65;     // ||Dv_n||_{L^{6/5}}
  double reg_ratio;      // measured ratio of the minimizer regularity estimate
  int sweeps;
};

struct TrajectoryRecord {
  std::vector<TrajectoryStep> steps;
  double H_initial;
  double H_stationary;
  double v0_l65_norm;     // L^{6/5} norm of the initial signal
  double sum_w2_sq;       // sum of squared mass increments
  double sum_dv_sq;       // sum of squared signal increments
  double max_H_increase;  // largest per-step energy increase observed
  std::vector<SystemState> states;  // initial + every recorded step
};

/// Runs n_steps of the scheme, recording all diagnostics against the supplied
/// stationary pair.
TrajectoryRecord run_trajectory(const SystemState& initial, const ModelParams& p,
                                const JkoConfig& cfg, int n_steps,
                                const SystemState& stationary, bool keep_states = false);

}  // namespace chemoflow
