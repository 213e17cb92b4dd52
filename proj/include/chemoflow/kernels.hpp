#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "chemoflow/grid.hpp"

namespace chemoflow {

// ---------------------------------------------------------------------------
// 3-D radial kernels
// ---------------------------------------------------------------------------

/// Tagged radial evaluator covering the three kernel families.
class RadialKernel {
public:
  enum class Kind { kYukawa3d, kHeat3d, kIterate };

  static RadialKernel yukawa3d(double kappa);
  static RadialKernel heat3d(double t);
  static RadialKernel iterate(double sigma, int k);

  Kind kind() const { return kind_; }
  double operator()(double r) const { return eval_(r); }

private:
  RadialKernel(Kind kind, std::function<double(double)> eval)
      : kind_(kind), eval_(std::move(eval)) {}
  Kind kind_;
  std::function<double(double)> eval_;
};

/// Yukawa (screened Coulomb) potential e^{-sqrt(kappa) r} / (4 pi r).
double yukawa_G(double kappa, double r);

/// Rescaled resolvent kernel Y_sigma = (1/sigma) G_{1/sigma}.
double yukawa_Y(double sigma, double r);

/// Heat kernel on R^3 at time t, as a function of the radius.
double heat_kernel3d(double t, double r);

/// Closed-form derivatives of G_kappa away from the origin.
struct YukawaDerivs {
  std::array<double, 3> grad;
  std::array<std::array<double, 3>, 3> hess;
  std::array<std::array<std::array<double, 3>, 3>, 3> third;
};
YukawaDerivs yukawa_derivatives(double kappa, const std::array<double, 3>& x);

/// k-fold kernel iterate Y_sigma^k evaluated through its heat-kernel mixture
///   Y_sigma^k(r) = int_0^inf H_{sigma s}(r) s^{k-1} e^{-s} / Gamma(k) ds.
/// The gamma mixture reduces to exp(k t - z cosh t) under s = sqrt(rho) e^t,
/// which trapezoid quadrature integrates to near machine precision; plain
/// Gauss-Laguerre in s cannot meet the accuracy budget at small k because of
/// the essential singularity of the heat kernel at s -> 0.
double yukawa_iterate(double sigma, int k, double r);

/// Radial derivative d/dr Y_sigma^k(r), same quadrature.
double yukawa_iterate_deriv(double sigma, int k, double r);

/// L^q norm of the gradient of the iterate together with its bound
/// Y_q (sigma k)^{-Q}, Q = 2 - 3/(2q), Y_q = Gamma(1-Q) ||D H_1||_{L^q}.
struct LqBoundPair {
  double norm;
  double bound;
};
LqBoundPair grad_iterate_Lq(double sigma, int k, double q);

/// ||D H_1||_{L^q(R^3)} by radial quadrature.
double grad_heat_kernel_Lq(double q);

/// Exponent Q = 2 - 3/(2q) of the iterate gradient bound.
double lq_exponent(double q);

/// a_k = k^Q Gamma(k-Q) / Gamma(k); decreasing in k for Q in (0,1).
double iterate_prefactor(double Q, int k);

// ---------------------------------------------------------------------------
// 1-D resolvent
// ---------------------------------------------------------------------------

/// Whole-line Green's function of -d^2/dx^2 + kappa: e^{-sqrt(kappa)|x|} / (2 sqrt(kappa)).
double resolvent_1d_kernel(double kappa, double x);

/// Factorized tridiagonal operator (-Lap_h + kappa) with homogeneous Neumann
/// closure on a Grid1D.  Immutable after construction.
class ResolventSolver1D {
public:
  ResolventSolver1D(const Grid1D& grid, double kappa);

  const Grid1D& grid() const { return grid_; }
  double kappa() const { return kappa_; }

  /// h with (-Lap_h + kappa) h = f, exact in the discrete sense.
  std::vector<double> solve(const std::vector<double>& f) const;

  /// (-Lap_h + kappa) applied to a grid function.
  std::vector<double> apply(const std::vector<double>& v) const;

private:
  Grid1D grid_;
  double kappa_;
  // prefactored Thomas coefficients
  std::vector<double> diag_, lower_, upper_, cprime_;
};

std::vector<double> solve_resolvent_1d(const std::vector<double>& f, double kappa,
                                       const ResolventSolver1D& solver);

/// Three-point Neumann Laplacian quadratic form pieces shared across modules.
/// apply_neumann_laplacian returns (-Lap_h v), i.e. the positive operator.
std::vector<double> apply_neumann_laplacian(const std::vector<double>& v, double h);

/// Eigenvalue of -Lap_h for the Neumann cosine mode cos(k pi (i+1/2)/n).
double neumann_mode_eigenvalue(int k, int n, double h);

// ---------------------------------------------------------------------------
// verification table
// ---------------------------------------------------------------------------

struct KernelCheckRow {
  std::string check;
  double lhs;
  double rhs;
  double tol;
  bool pass;
};

/// Runs the kernel invariants (identities, mixtures, norms, resolvent checks)
/// and returns one row per check.
std::vector<KernelCheckRow> verify_kernels();

}  // namespace chemoflow
