#pragma once

#include <string>
#include <vector>

#include "chemoflow/model.hpp"
#include "chemoflow/state.hpp"

namespace chemoflow {

struct StationaryResult {
  SystemState state;
  double u_level;        // U_eps: level such that [U - W - eps phi(v)]_+ has unit mass
  double el_residual_v;  // l2 residual of (A3 + kappa) v + eps u phi'(v)
  double mass_error;
  int iterations;
  double v_sup;  // computed V = sup v_inf
  bool convexity_verified;  // eps below the flat-convexity threshold
};

/// Level U with mass([U - W - eps phi(v)]_+) = 1, found by bisection; the
/// bracket is widened once before giving up.
double normalization_bisect(const ConcentrationField& v, const ModelParams& p,
                            double tol = 1e-12);

/// Damped alternation between the semilinear resolvent equation for v and
/// the normalized positive-part formula for u; warns (flag in the result)
/// when eps exceeds the convexity threshold.  v_start seeds the fixed-point
/// iteration (zero by default); distinct seeds must land on the same state.
StationaryResult solve_stationary(const ModelParams& p, const Grid1D& grid, double tol = 1e-11,
                                  const std::vector<double>* v_start = nullptr);

struct StationaryBound {
  std::string name;
  double lhs;
  double rhs;
  bool pass;
};

struct StationaryBoundsReport {
  std::vector<StationaryBound> bounds;
  // |Dv_inf|_inf / eps across the sweep {eps0, eps0/2, eps0/4}
  std::vector<double> grad_ratio_sweep;
  bool grad_ratios_within_factor2;
  // measured |D^2 v_inf|_inf / eps across the same sweep (reported only)
  std::vector<double> hess_ratio_sweep;
  bool all_pass() const;
};

/// Checks max u_inf <= U_0 - eps V phi'(0) with the computed V, and the
/// linear-in-eps scaling of |Dv_inf| across an eps sweep.
StationaryBoundsReport verify_stationary_bounds(const StationaryResult& r, const ModelParams& p);

}  // namespace chemoflow
