#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chemoflow/grid.hpp"

namespace chemoflow {

enum class ResponseFamily { kLinear, kLogSaturation, kRationalSaturation };

/// Convex, strictly decreasing response function of the signal concentration,
/// with bounded first and second derivatives on [0, inf).
class ResponseFunction {
public:
  static ResponseFunction linear();               // phi(w) = -w
  static ResponseFunction log_saturation();       // phi(w) = -log(1+w)
  static ResponseFunction rational_saturation();  // phi(w) = 1/(1+w)
  static ResponseFunction from_name(const std::string& name);

  ResponseFamily family() const { return family_; }
  std::string name() const;

  double phi(double w) const { return phi_(w); }
  double dphi(double w) const { return dphi_(w); }
  double d2phi(double w) const { return d2phi_(w); }

  double dphi0() const { return dphi0_; }          // phi'(0) < 0
  double d2phi_bound() const { return d2_bound_; }  // sup phi''

private:
  ResponseFunction(ResponseFamily family, std::function<double(double)> phi,
                   std::function<double(double)> dphi, std::function<double(double)> d2phi,
                   double dphi0, double d2_bound);

  ResponseFamily family_;
  std::function<double(double)> phi_, dphi_, d2phi_;
  double dphi0_;
  double d2_bound_;
};

/// Uniformly convex external potential with modulus lambda0 > 0.
class Confinement {
public:
  /// W(x) = lambda0 (x - center)^2 / 2
  static Confinement quadratic(double lambda0, double center = 0.0);
  /// Arbitrary evaluators with a claimed modulus; validate_params checks the
  /// claim on the grid.
  static Confinement custom(std::function<double(double)> w, std::function<double(double)> dw,
                            std::function<double(double)> d2w, double lambda0);

  double operator()(double x) const { return w_(x); }
  double grad(double x) const { return dw_(x); }
  double hess(double x) const { return d2w_(x); }
  double lambda0() const { return lambda0_; }

private:
  Confinement(std::function<double(double)> w, std::function<double(double)> dw,
              std::function<double(double)> d2w, double lambda0);
  std::function<double(double)> w_, dw_, d2w_;
  double lambda0_;
};

struct ModelParams {
  double epsilon;  // coupling strength, >= 0
  double kappa;    // signal decay rate, > 0
  ResponseFunction phi;
  Confinement potential;

  ModelParams(double eps, double kap, ResponseFunction response, Confinement w);

  /// Sufficient smallness criterion for joint convexity of the energy in the
  /// flat metric: epsilon^2 phi'(0)^2 < kappa.
  bool below_convexity_threshold() const {
    return epsilon * epsilon * dphi0() * dphi0() < kappa;
  }
  double dphi0() const { return phi.dphi0(); }
};

struct AssumptionCheck {
  std::string name;
  bool pass;
  double witness;  // point where the worst margin occurs
  double value;    // measured value there
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_pass() const;
};

/// Samples the standing assumptions: phi strictly decreasing with bounded
/// slope and curvature on a 1000-point lattice of w in [0, 100]; W >= 0 and
/// W'' >= lambda0 at the grid centers; kappa > 0, epsilon >= 0.
AssumptionReport validate_params(const ModelParams& params, const Grid1D& grid);

}  // namespace chemoflow
