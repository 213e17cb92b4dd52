#include "chemoflow/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "chemoflow/quadrature.hpp"

namespace chemoflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// One-dimensional integrals of the form int exp(nu t - z cosh t) dt that the
/// gamma mixture reduces to.  cosh_moment = 0 gives the plain integral,
/// cosh_moment = 1 weights the integrand by cosh(t).
double cosh_integral(double nu, double z, int cosh_moment) {
  const double half_width =
      std::max(9.0, std::log(std::max(std::abs(nu), 1.0) * 60.0 / z + 10.0) + 9.0);
  const int npts = 320;
  const double dt = 2.0 * half_width / (npts - 1);
  double acc = 0.0;
  for (int i = 0; i < npts; ++i) {
    const double t = -half_width + i * dt;
    double val = std::exp(nu * t - z * std::cosh(t));
    if (cosh_moment == 1) val *= std::cosh(t);
    acc += val;
  }
  return acc * dt;
}

struct MixtureEval {
  double value;
  double deriv;
};

/// Y_sigma^k(r) and its radial derivative through the heat-kernel mixture.
/// Substituting s = sqrt(rho) e^t in
///   int_0^inf s^{k-5/2} e^{-s - rho/s} ds,  rho = r^2/(4 sigma),
/// yields rho^{nu/2} int exp(nu t - z cosh t) dt with nu = k - 3/2 and
/// z = r/sqrt(sigma); the transformed integrand decays doubly exponentially,
/// so the trapezoid rule above is accurate to ~1e-12 for all (sigma, k, r).
MixtureEval iterate_eval(double sigma, int k, double r) {
  if (sigma <= 0.0) throw std::invalid_argument("yukawa_iterate: sigma must be positive");
  if (k < 1) throw std::invalid_argument("yukawa_iterate: k must be at least 1");
  const double nu = k - 1.5;
  const double prefactor = std::pow(4.0 * kPi * sigma, -1.5) / std::tgamma(double(k));
  if (r <= 0.0) {
    // Gamma(k - 3/2) / Gamma(k) leftover of the mixture at the origin
    if (k >= 2)
      return {std::pow(4.0 * kPi * sigma, -1.5) * std::tgamma(k - 1.5) / std::tgamma(double(k)),
              0.0};
    throw std::invalid_argument("yukawa_iterate: r must be positive for k = 1");
  }
  const double rho = r * r / (4.0 * sigma);
  const double z = r / std::sqrt(sigma);
  const double base = cosh_integral(nu, z, 0);
  const double weighted = cosh_integral(nu, z, 1);
  const double pow_rho = std::pow(rho, 0.5 * nu);
  MixtureEval out{};
  out.value = prefactor * pow_rho * base;
  out.deriv = prefactor * pow_rho * (nu / r * base - weighted / std::sqrt(sigma));
  return out;
}

}  // namespace

RadialKernel RadialKernel::yukawa3d(double kappa) {
  return RadialKernel(Kind::kYukawa3d, [kappa](double r) { return yukawa_G(kappa, r); });
}

RadialKernel RadialKernel::heat3d(double t) {
  return RadialKernel(Kind::kHeat3d, [t](double r) { return heat_kernel3d(t, r); });
}

RadialKernel RadialKernel::iterate(double sigma, int k) {
  return RadialKernel(Kind::kIterate, [sigma, k](double r) { return yukawa_iterate(sigma, k, r); });
}

double yukawa_G(double kappa, double r) {
  if (!(kappa > 0.0)) throw std::invalid_argument("yukawa_G: kappa must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("yukawa_G: r must be positive");
  return std::exp(-std::sqrt(kappa) * r) / (4.0 * kPi * r);
}

double yukawa_Y(double sigma, double r) { return yukawa_G(1.0 / sigma, r) / sigma; }

double heat_kernel3d(double t, double r) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_kernel3d: t must be positive");
  return std::pow(t, -1.5) * std::pow(4.0 * kPi, -1.5) * std::exp(-r * r / (4.0 * t));
}

YukawaDerivs yukawa_derivatives(double kappa, const std::array<double, 3>& x) {
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  if (!(r2 > 0.0)) throw std::invalid_argument("yukawa_derivatives: x must be nonzero");
  const double r = std::sqrt(r2);
  const double sk = std::sqrt(kappa);
  const double e = std::exp(-sk * r);
  const double c = -1.0 / (4.0 * kPi);

  YukawaDerivs d{};
  const double g1 = c * e / (r2 * r) * (sk * r + 1.0);  // grad = g1 * x
  for (int i = 0; i < 3; ++i) d.grad[static_cast<size_t>(i)] = g1 * x[static_cast<size_t>(i)];

  // Hessian: d_j (g1 x_i) = f'(r) x_i x_j / r + f(r) delta_ij with f = g1;
  // its trace is kappa G, matching Lap G = kappa G away from the origin.
  const double r3 = r2 * r, r4 = r2 * r2, r5 = r4 * r;
  const double q = kappa / r3 + 3.0 * sk / r4 + 3.0 / r5;  // = f'(r)/(-c e r) sign folded below
  const double p = sk / r2 + 1.0 / r3;
  const double ce = e / (4.0 * kPi);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double del = (i == j) ? 1.0 : 0.0;
      d.hess[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          ce * (q * x[static_cast<size_t>(i)] * x[static_cast<size_t>(j)] - p * del);
    }

  const double dq = -3.0 * kappa / r4 - 12.0 * sk / r5 - 15.0 / (r5 * r);
  const double dp = -2.0 * sk / r3 - 3.0 / r4;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const double dij = (i == j) ? 1.0 : 0.0;
        const double dik = (i == k) ? 1.0 : 0.0;
        const double djk = (j == k) ? 1.0 : 0.0;
        const double xi = x[static_cast<size_t>(i)], xj = x[static_cast<size_t>(j)],
                     xk = x[static_cast<size_t>(k)];
        // product rule on ce(r) (q(r) x_i x_j - p(r) delta_ij)
        double val = ce * (-sk * xk / r) * (q * xi * xj - p * dij);
        val += ce * ((dq * xk / r) * xi * xj + q * (dik * xj + djk * xi) - (dp * xk / r) * dij);
        d.third[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)] = val;
      }
  return d;
}

double yukawa_iterate(double sigma, int k, double r) { return iterate_eval(sigma, k, r).value; }

double yukawa_iterate_deriv(double sigma, int k, double r) {
  return iterate_eval(sigma, k, r).deriv;
}

double grad_heat_kernel_Lq(double q) {
  // |DH_1|(r) = (4 pi)^{-3/2} (r/2) exp(-r^2/4)
  const double integral = quad::panels(
      [q](double r) {
        const double g = std::pow(4.0 * kPi, -1.5) * 0.5 * r * std::exp(-r * r / 4.0);
        return 4.0 * kPi * r * r * std::pow(g, q);
      },
      0.0, 30.0, 48);
  return std::pow(integral, 1.0 / q);
}

double lq_exponent(double q) { return 2.0 - 1.5 / q; }

double iterate_prefactor(double Q, int k) {
  return std::exp(Q * std::log(double(k)) + std::lgamma(k - Q) - std::lgamma(double(k)));
}

LqBoundPair grad_iterate_Lq(double sigma, int k, double q) {
  if (!(q >= 1.0 && q < 1.5))
    throw std::invalid_argument("grad_iterate_Lq: q must lie in [1, 3/2)");
  const double Q = lq_exponent(q);
  const double r_max = std::sqrt(sigma) * (60.0 + 15.0 * k);
  // |DY|^q r^2 behaves like r^{2-2q} near the origin for k = 1; graded panels
  // resolve the integrable singularity
  const double integral = quad::graded_panels(
      [&](double r) {
        const double dy = yukawa_iterate_deriv(sigma, k, r);
        return 4.0 * kPi * r * r * std::pow(std::abs(dy), q);
      },
      0.0, r_max, 44);
  LqBoundPair out{};
  out.norm = std::pow(integral, 1.0 / q);
  out.bound = std::tgamma(1.0 - Q) * grad_heat_kernel_Lq(q) * std::pow(sigma * k, -Q);
  return out;
}

double resolvent_1d_kernel(double kappa, double x) {
  if (!(kappa > 0.0)) throw std::invalid_argument("resolvent_1d_kernel: kappa must be positive");
  const double sk = std::sqrt(kappa);
  return std::exp(-sk * std::abs(x)) / (2.0 * sk);
}

std::vector<double> apply_neumann_laplacian(const std::vector<double>& v, double h) {
  const size_t n = v.size();
  std::vector<double> out(n);
  const double inv_h2 = 1.0 / (h * h);
  for (size_t i = 0; i < n; ++i) {
    const double left = (i == 0) ? v[0] : v[i - 1];
    const double right = (i + 1 == n) ? v[n - 1] : v[i + 1];
    out[i] = (2.0 * v[i] - left - right) * inv_h2;
  }
  return out;
}

double neumann_mode_eigenvalue(int k, int n, double h) {
  const double s = std::sin(0.5 * kPi * k / n);
  return 4.0 / (h * h) * s * s;
}

ResolventSolver1D::ResolventSolver1D(const Grid1D& grid, double kappa)
    : grid_(grid), kappa_(kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("ResolventSolver1D: kappa must be positive");
  const int n = grid.n_cells();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  diag_.assign(static_cast<size_t>(n), kappa + 2.0 * inv_h2);
  diag_.front() = kappa + inv_h2;
  diag_.back() = kappa + inv_h2;
  lower_.assign(static_cast<size_t>(n) - 1, -inv_h2);
  upper_.assign(static_cast<size_t>(n) - 1, -inv_h2);
  // prefactored forward elimination
  cprime_.assign(static_cast<size_t>(n), 0.0);
  cprime_[0] = upper_[0] / diag_[0];
  for (int i = 1; i < n; ++i) {
    const double denom = diag_[static_cast<size_t>(i)] -
                         lower_[static_cast<size_t>(i) - 1] * cprime_[static_cast<size_t>(i) - 1];
    cprime_[static_cast<size_t>(i)] = (i < n - 1) ? upper_[static_cast<size_t>(i)] / denom : 0.0;
  }
}

std::vector<double> ResolventSolver1D::solve(const std::vector<double>& f) const {
  const int n = grid_.n_cells();
  if (static_cast<int>(f.size()) != n)
    throw std::invalid_argument("ResolventSolver1D: rhs size mismatch");
  std::vector<double> d(static_cast<size_t>(n));
  double denom = diag_[0];
  d[0] = f[0] / denom;
  for (int i = 1; i < n; ++i) {
    denom = diag_[static_cast<size_t>(i)] -
            lower_[static_cast<size_t>(i) - 1] * cprime_[static_cast<size_t>(i) - 1];
    d[static_cast<size_t>(i)] =
        (f[static_cast<size_t>(i)] - lower_[static_cast<size_t>(i) - 1] * d[static_cast<size_t>(i) - 1]) / denom;
  }
  for (int i = n - 2; i >= 0; --i)
    d[static_cast<size_t>(i)] -= cprime_[static_cast<size_t>(i)] * d[static_cast<size_t>(i) + 1];
  return d;
}

std::vector<double> ResolventSolver1D::apply(const std::vector<double>& v) const {
  std::vector<double> out = apply_neumann_laplacian(v, grid_.spacing());
  for (size_t i = 0; i < out.size(); ++i) out[i] += kappa_ * v[i];
  return out;
}

std::vector<double> solve_resolvent_1d(const std::vector<double>& f, double kappa,
                                       const ResolventSolver1D& solver) {
  if (solver.kappa() != kappa)
    throw std::invalid_argument("solve_resolvent_1d: solver factorized for a different kappa");
  return solver.solve(f);
}

// ---------------------------------------------------------------------------
// verification suite
// ---------------------------------------------------------------------------

namespace {

double lcg_uniform(unsigned long& state) {
  state = state * 6364136223846793005ull + 1442695040888963407ull;
  return double((state >> 11) & ((1ull << 53) - 1)) / double(1ull << 53);
}

/// Radial 3-D convolution (g*f)(r) = (2 pi / r) int s f(s) [Phi(r+s) - Phi(|r-s|)] ds
/// with Phi(a) = int_0^a t g(t) dt tabulated by the trapezoid rule.
class RadialConvolution {
public:
  RadialConvolution(std::function<double(double)> g, double table_max, int table_n)
      : table_max_(table_max), table_(static_cast<size_t>(table_n) + 1, 0.0) {
    const double dt = table_max / table_n;
    double prev = 0.0;  // t g(t) -> 0 as t -> 0 for these kernels
    for (int i = 1; i <= table_n; ++i) {
      const double t = i * dt;
      const double cur = t * g(t);
      table_[static_cast<size_t>(i)] = table_[static_cast<size_t>(i) - 1] + 0.5 * (prev + cur) * dt;
      prev = cur;
    }
    dt_ = dt;
  }

  double Phi(double a) const {
    if (a <= 0.0) return 0.0;
    if (a >= table_max_) return table_.back();
    const double t = a / dt_;
    const size_t i = static_cast<size_t>(t);
    const double frac = t - double(i);
    return table_[i] * (1.0 - frac) + table_[i + 1] * frac;
  }

  double operator()(const std::function<double(double)>& f, double f_support, double r) const {
    // the |r - s| kink sits at s = r; integrate the two sides separately
    auto integrand = [&](double s) { return s * f(s) * (Phi(r + s) - Phi(std::abs(r - s))); };
    double integral;
    if (r > 0.0 && r < f_support)
      integral = quad::panels(integrand, 0.0, r, 48) + quad::panels(integrand, r, f_support, 48);
    else
      integral = quad::panels(integrand, 0.0, f_support, 64);
    return 2.0 * kPi / r * integral;
  }

private:
  double table_max_;
  double dt_;
  std::vector<double> table_;
};

}  // namespace

std::vector<KernelCheckRow> verify_kernels() {
  std::vector<KernelCheckRow> rows;
  auto push = [&rows](const std::string& name, double lhs, double rhs, double tol) {
    rows.push_back({name, lhs, rhs, tol, std::abs(lhs - rhs) <= tol});
  };
  auto push_le = [&rows](const std::string& name, double lhs, double rhs, double tol) {
    rows.push_back({name, lhs, rhs, tol, lhs <= rhs + tol});
  };

  push("yukawa_value_kappa1_r1", yukawa_G(1.0, 1.0), std::exp(-1.0) / (4.0 * kPi), 1e-14);
  push("yukawa_value_kappa4_r05", yukawa_G(4.0, 0.5), std::exp(-1.0) / (2.0 * kPi), 1e-14);
  push("yukawa_scaling_Y_sigma2_r1", yukawa_Y(2.0, 1.0), 0.5 * yukawa_G(0.5, 1.0), 1e-14);

  // gradient against central differences at deterministic points
  {
    unsigned long rng = 12345;
    double max_err = 0.0;
    for (int t = 0; t < 20; ++t) {
      std::array<double, 3> x{};
      for (auto& c : x) c = 0.3 + 2.0 * lcg_uniform(rng);
      const auto d = yukawa_derivatives(1.0, x);
      const double fd_h = 1e-5;
      for (int i = 0; i < 3; ++i) {
        auto xp = x, xm = x;
        xp[static_cast<size_t>(i)] += fd_h;
        xm[static_cast<size_t>(i)] -= fd_h;
        auto norm = [](const std::array<double, 3>& y) {
          return std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
        };
        const double fd = (yukawa_G(1.0, norm(xp)) - yukawa_G(1.0, norm(xm))) / (2.0 * fd_h);
        max_err = std::max(max_err, std::abs(fd - d.grad[static_cast<size_t>(i)]));
      }
    }
    push_le("gradient_matches_finite_differences", max_err, 0.0, 1e-6);
  }

  // harmonicity: trace(Hess) = kappa G away from the origin
  {
    double max_err = 0.0;
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
      const std::array<double, 3> x{r / std::sqrt(3.0), r / std::sqrt(3.0), r / std::sqrt(3.0)};
      const auto d = yukawa_derivatives(2.0, x);
      const double tr = d.hess[0][0] + d.hess[1][1] + d.hess[2][2];
      max_err = std::max(max_err, std::abs(tr - 2.0 * yukawa_G(2.0, r)));
    }
    push_le("hessian_trace_harmonicity", max_err, 0.0, 1e-8);
  }

  // heat kernel mass and value
  push("heat_value_t1_r0", heat_kernel3d(1.0, 0.0), std::pow(4.0 * kPi, -1.5), 1e-14);
  {
    const double mass = quad::panels(
        [](double r) { return 4.0 * kPi * r * r * heat_kernel3d(1.0, r); }, 0.0, 30.0, 48);
    push("heat_mass", mass, 1.0, 1e-8);
  }
  {
    // semigroup H_1 * H_1 = H_2; inner integral in closed form, outer split
    // at the |r - s| kink
    auto Phi_heat = [](double a) {
      return std::pow(4.0 * kPi, -1.5) * 2.0 * (1.0 - std::exp(-a * a / 4.0));
    };
    double max_err = 0.0;
    for (double r : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      auto integrand = [&](double s) {
        return s * heat_kernel3d(1.0, s) * (Phi_heat(r + s) - Phi_heat(std::abs(r - s)));
      };
      const double conv = 2.0 * kPi / r *
                          (quad::panels(integrand, 0.0, r, 32) + quad::panels(integrand, r, 30.0, 48));
      max_err = std::max(max_err, std::abs(conv - heat_kernel3d(2.0, r)));
    }
    push_le("heat_semigroup_self_convolution", max_err, 0.0, 1e-6);
  }

  push("iterate_k1_reduction_sigma1_r1", yukawa_iterate(1.0, 1, 1.0), yukawa_G(1.0, 1.0), 1e-8);

  {
    // iterate semigroup Y^k1 * Y^k2 = Y^{k1+k2} for k1 + k2 <= 6
    for (const auto& [k1, k2] : {std::pair{1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}}) {
      RadialConvolution conv([k2 = k2](double t) { return yukawa_iterate(1.0, k2, t); }, 60.0,
                             30000);
      double max_err = 0.0;
      for (double r : {0.5, 1.0, 2.0, 4.0}) {
        const double lhs =
            conv([k1 = k1](double s) { return yukawa_iterate(1.0, k1, s); }, 60.0, r);
        max_err = std::max(max_err, std::abs(lhs - yukawa_iterate(1.0, k1 + k2, r)));
      }
      char name[64];
      std::snprintf(name, sizeof(name), "iterate_semigroup_k%d_k%d", k1, k2);
      push_le(name, max_err, 0.0, 1e-5);
    }
  }

  for (int k : {1, 2, 4}) {
    const double mass = quad::graded_panels(
        [k](double r) { return 4.0 * kPi * r * r * yukawa_iterate(1.0, k, r); }, 0.0, 90.0, 44);
    push("iterate_mass_k" + std::to_string(k), mass, 1.0, 1e-6);
  }

  // explicit gradient-norm constants and the tight case
  push("Y1_constant", std::tgamma(0.5) * grad_heat_kernel_Lq(1.0), 2.0, 1e-8);
  {
    const auto tight = grad_iterate_Lq(1.0, 1, 1.0);
    push("Yq_bound_q1_sigma1_k1_norm", tight.norm, 2.0, 1e-8);
    push("Yq_bound_q1_sigma1_k1_bound", tight.bound, 2.0, 1e-8);
  }
  for (double sigma : {0.5, 1.0, 2.0})
    for (int k : {1, 2, 4})
      for (double q : {1.0, 1.2, 1.4}) {
        const auto pair = grad_iterate_Lq(sigma, k, q);
        char name[96];
        std::snprintf(name, sizeof(name), "Yq_bound_s%g_k%d_q%g", sigma, k, q);
        push_le(name, pair.norm, pair.bound, 1e-8 * (1.0 + pair.bound));
      }

  {
    bool monotone = true;
    for (double q : {1.0, 1.2, 1.4}) {
      const double Q = lq_exponent(q);
      for (int k = 1; k < 50; ++k)
        if (!(iterate_prefactor(Q, k + 1) < iterate_prefactor(Q, k))) monotone = false;
    }
    rows.push_back({"iterate_prefactor_decreasing_k50", monotone ? 1.0 : 0.0, 1.0, 0.0, monotone});
  }

  // 1-D resolvent
  push("resolvent1d_value_x0", resolvent_1d_kernel(1.0, 0.0), 0.5, 1e-14);
  push("resolvent1d_value_x1", resolvent_1d_kernel(1.0, 1.0), 0.5 * std::exp(-1.0), 1e-14);
  {
    const double mass =
        quad::panels([](double x) { return resolvent_1d_kernel(2.0, x); }, -60.0, 60.0, 64);
    push("resolvent1d_mass", mass, 1.0 / 2.0, 1e-10);
  }

  {
    const Grid1D grid = build_grid(6.0, 480);
    const ResolventSolver1D solver(grid, 1.5);
    unsigned long rng = 999;
    std::vector<double> f(static_cast<size_t>(grid.n_cells()));
    for (auto& fi : f) fi = lcg_uniform(rng) - 0.5;
    const auto hsol = solver.solve(f);
    const auto back = solver.apply(hsol);
    double max_err = 0.0;
    for (size_t i = 0; i < f.size(); ++i) max_err = std::max(max_err, std::abs(back[i] - f[i]));
    push_le("resolvent_identity", max_err, 0.0, 1e-10);

    // constants: f = c -> h = c/kappa
    std::vector<double> c(static_cast<size_t>(grid.n_cells()), 3.0);
    const auto hc = solver.solve(c);
    double err_c = 0.0;
    for (double v : hc) err_c = std::max(err_c, std::abs(v - 2.0));
    push_le("resolvent_constants", err_c, 0.0, 1e-10);

    // discrete eigenmode
    const int mode = 2;
    std::vector<double> fm(static_cast<size_t>(grid.n_cells()));
    for (int i = 0; i < grid.n_cells(); ++i)
      fm[static_cast<size_t>(i)] = std::cos(kPi * mode * (i + 0.5) / grid.n_cells());
    const double mu = neumann_mode_eigenvalue(mode, grid.n_cells(), grid.spacing());
    const auto hm = solver.solve(fm);
    double err_m = 0.0;
    for (size_t i = 0; i < fm.size(); ++i)
      err_m = std::max(err_m, std::abs(hm[i] - fm[i] / (1.5 + mu)));
    push_le("resolvent_eigenmode_discrete_symbol", err_m, 0.0, 1e-8);

    // p = 2 regularity with the Fourier-explicit constant 5/2
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> ft(static_cast<size_t>(grid.n_cells()));
      for (auto& v : ft) v = 2.0 * lcg_uniform(rng) - 1.0;
      const double kap = 0.5 + 3.0 * lcg_uniform(rng);
      const ResolventSolver1D sv(grid, kap);
      const auto ht = sv.solve(ft);
      const double h = grid.spacing();
      double nf = 0.0, nh = 0.0, ndh = 0.0, nd2h = 0.0;
      for (size_t i = 0; i < ft.size(); ++i) {
        nf += ft[i] * ft[i];
        nh += ht[i] * ht[i];
      }
      for (size_t i = 0; i + 1 < ht.size(); ++i) {
        const double d = (ht[i + 1] - ht[i]) / h;
        ndh += d * d;
      }
      const auto lap = apply_neumann_laplacian(ht, h);
      for (double v : lap) nd2h += v * v;
      const double lhs = kap * std::sqrt(nh) + std::sqrt(kap) * std::sqrt(ndh) + std::sqrt(nd2h);
      worst_ratio = std::max(worst_ratio, lhs / std::sqrt(nf));
    }
    push_le("p2_regularity_constant", worst_ratio, 2.5, 0.0);
  }

  {
    // -Lap(G*f) + kappa (G*f) = f for a smooth compactly supported radial f,
    // with (G*f)(r) = 1/(2 sqrt(kappa) r) int s f(s) (e^{-sk|r-s|} - e^{-sk(r+s)}) ds
    const double kap = 1.3, sk = std::sqrt(kap);
    auto f = [](double r) {
      if (r >= 2.0) return 0.0;
      const double c = 1.0 - r * r / 4.0;
      return c * c * c;
    };
    auto w_of = [&](double r) {
      auto integrand = [&](double s) {
        return s * f(s) * (std::exp(-sk * std::abs(r - s)) - std::exp(-sk * (r + s)));
      };
      // split at the kink so that the quadrature error stays smooth in r
      const double integral = (r > 0.0 && r < 2.0)
                                  ? quad::panels(integrand, 0.0, r, 24) +
                                        quad::panels(integrand, r, 2.0, 24)
                                  : quad::panels(integrand, 0.0, 2.0, 32);
      return integral / (2.0 * sk * r);
    };
    const double dr = 2e-4;
    double max_res = 0.0;
    for (double r : {0.3, 0.8, 1.5, 2.5, 3.5}) {
      // radial Laplacian via phi = r w: Lap w = (phi(r+dr) - 2 phi(r) + phi(r-dr)) / (dr^2 r)
      const double lap =
          ((r + dr) * w_of(r + dr) - 2.0 * r * w_of(r) + (r - dr) * w_of(r - dr)) / (dr * dr * r);
      max_res = std::max(max_res, std::abs(-lap + kap * w_of(r) - f(r)));
    }
    push_le("yukawa_pde_radial", max_res, 0.0, 1e-4);
  }

  return rows;
}

}  // namespace chemoflow
