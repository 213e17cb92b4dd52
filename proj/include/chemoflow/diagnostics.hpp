#pragma once

#include <string>
#include <vector>

#include "chemoflow/jko.hpp"
#include "chemoflow/model.hpp"

namespace chemoflow {

enum class DecayQuantity { kL, kLu, kLv, kHGap };

struct DecayFit {
  double t_begin, t_end;   // window actually used
  double rate;             // -slope of log(quantity) vs t
  double r_squared;
  double reference;        // 2 min(kappa, lambda0), the functional-rate ceiling
  int points;
};

/// Least-squares slope of log(quantity) against time on [t_begin, t_end];
/// shrinks the window to the last positive prefix and requires >= 10 points.
DecayFit fit_decay_rate(const TrajectoryRecord& traj, DecayQuantity q, double t_begin,
                        double t_end, const ModelParams& p);

DecayFit fit_series(const std::vector<double>& t, const std::vector<double>& y,
                    double t_begin, double t_end, double reference);

/// min(kappa, lambda0): the zero-coupling ceiling of the convergence rate.
double reference_rate(const ModelParams& p);

/// Explicit constants of the gradient-control estimate, evaluated as stated
/// for the 3-D heat kernel.
struct DecayConstants {
  double a;      // (1 + kappa) Y_1
  double y1;     // Gamma(1/2) ||D H_1||_{L^1} = 2
  double y65;    // Gamma(1/4) ||D H_1||_{L^{6/5}}
  double m1;     // |phi'(0)| Y_{6/5} (1+kappa)^{3/4} Gamma(1/4) / ln(1+kappa)^{1/4}
  double t1;     // max(0, log(a |v0|_{6/5} / m1) / kappa)
  double kappa;
  double discrete(double rate, double tau) const;  // [rate]_tau
  double exponent_Q(double q) const;               // 2 - 3/(2q)
  double y_q(double q) const;                      // Gamma(1-Q) ||D H_1||_{L^q}
};

DecayConstants decay_constants(const ModelParams& p, double v0_l65_norm);

/// [a]_tau = log(1 + a tau)/tau; < a, increasing as tau decreases.
double discrete_rate(double a, double tau);

struct GradientControlReport {
  double t1;
  double m1;
  double a;
  bool time_bound_all_steps;   // per-step envelope bound
  bool control_past_t1;        // |Dv|_{6/5} <= 2 M_1 for n tau >= T_1
  int first_violation_step;    // -1 if none
  std::string caveat;          // dimension caveat, always set
};

GradientControlReport gradient_control_check(const TrajectoryRecord& traj,
                                             const DecayConstants& c, double epsilon,
                                             double tau);

}  // namespace chemoflow
