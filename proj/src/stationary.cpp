#include "chemoflow/stationary.hpp"

#include <algorithm>
#include <cmath>

#include "chemoflow/entropy.hpp"
#include "chemoflow/errors.hpp"
#include "chemoflow/kernels.hpp"
#include "chemoflow/transport.hpp"

namespace chemoflow {

namespace {

using Vec = std::vector<double>;

double mass_at_level(double level, const Vec& V, double h) {
  double m = 0.0;
  for (double vi : V) m += std::max(level - vi, 0.0);
  return m * h;
}

/// Bisection for mass([U - V]_+) = 1; mass is continuous, nondecreasing and
/// unbounded in U, so a bracket always exists once wide enough.
double level_bisect(const Vec& V, double h, double half_width, double tol) {
  double lo = *std::min_element(V.begin(), V.end());
  double hi = lo + 10.0 * (1.0 + half_width * half_width);
  if (mass_at_level(hi, V, h) < 1.0) {
    hi = lo + 100.0 * (1.0 + half_width * half_width);  // widen once, then give up
    if (mass_at_level(hi, V, h) < 1.0)
      throw SolverError("normalization_bisect: no bracket for the unit-mass level");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass_at_level(mid, V, h) < 1.0)
      lo = mid;
    else
      hi = mid;
    if (std::abs(mass_at_level(mid, V, h) - 1.0) <= tol && hi - lo < 1e-14 * (1.0 + std::abs(mid)))
      break;
  }
  return 0.5 * (lo + hi);
}

Vec positive_part_density(double level, const Vec& V) {
  Vec u(V.size());
  for (size_t i = 0; i < V.size(); ++i) u[i] = std::max(level - V[i], 0.0);
  return u;
}

/// Semilinear resolvent solve (A3 + kappa) v = -eps u phi'(v) by Newton.
Vec solve_v_given_u(const Vec& u, Vec v, const Grid1D& g, const ModelParams& p) {
  const int n = g.n_cells();
  const double h = g.spacing();
  const double inv_h2 = 1.0 / (h * h);
  auto residual = [&](const Vec& w, Vec& r) {
    const Vec lap = apply_neumann_laplacian(w, h);
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const size_t k = static_cast<size_t>(i);
      r[k] = lap[k] + p.kappa * w[k] + p.epsilon * u[k] * p.phi.dphi(w[k]);
      norm2 += r[k] * r[k];
    }
    return std::sqrt(norm2 * h);
  };
  Vec r(static_cast<size_t>(n));
  double res = residual(v, r);
  for (int it = 0; it < 80 && res > 1e-13; ++it) {
    Vec diag(static_cast<size_t>(n)), off(static_cast<size_t>(n) - 1, -inv_h2);
    for (int i = 0; i < n; ++i) {
      const size_t k = static_cast<size_t>(i);
      const double boundary = (i == 0 || i == n - 1) ? inv_h2 : 2.0 * inv_h2;
      diag[k] = boundary + p.kappa + p.epsilon * u[k] * p.phi.d2phi(v[k]);
    }
    // Thomas
    Vec cp(static_cast<size_t>(n) - 1), d(r);
    cp[0] = off[0] / diag[0];
    d[0] /= diag[0];
    for (int i = 1; i < n; ++i) {
      const size_t k = static_cast<size_t>(i);
      const double m = diag[k] - off[k - 1] * cp[k - 1];
      if (i < n - 1) cp[k] = off[k] / m;
      d[k] = (d[k] - off[k - 1] * d[k - 1]) / m;
    }
    for (int i = n - 2; i >= 0; --i)
      d[static_cast<size_t>(i)] -= cp[static_cast<size_t>(i)] * d[static_cast<size_t>(i) + 1];

    double alpha = 1.0;
    bool improved = false;
    for (int half = 0; half < 40; ++half) {
      Vec vn(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i)
        vn[static_cast<size_t>(i)] = v[static_cast<size_t>(i)] - alpha * d[static_cast<size_t>(i)];
      Vec rn(static_cast<size_t>(n));
      const double resn = residual(vn, rn);
      if (resn < res) {
        v = std::move(vn);
        r = std::move(rn);
        res = resn;
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) break;
  }
  return v;
}

}  // namespace

double normalization_bisect(const ConcentrationField& v, const ModelParams& p, double tol) {
  const Grid1D& g = v.grid();
  Vec V(static_cast<size_t>(g.n_cells()));
  for (int i = 0; i < g.n_cells(); ++i)
    V[static_cast<size_t>(i)] =
        p.potential(g.center(i)) + p.epsilon * p.phi.phi(v.value(i));
  return level_bisect(V, g.spacing(), g.half_width(), tol);
}

StationaryResult solve_stationary(const ModelParams& p, const Grid1D& grid, double tol,
                                  const std::vector<double>* v_start) {
  const int n = grid.n_cells();
  const double h = grid.spacing();
  const bool convexity_ok = p.below_convexity_threshold();

  // start from the uncoupled profile
  Vec V0(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) V0[static_cast<size_t>(i)] = p.potential(grid.center(i));
  double level = level_bisect(V0, h, grid.half_width(), 1e-13);
  Vec u = positive_part_density(level, V0);
  Vec v = v_start ? *v_start : Vec(static_cast<size_t>(n), 0.0);
  if (v_start && static_cast<int>(v_start->size()) != n)
    throw std::invalid_argument("solve_stationary: v_start size mismatch");

  const double omega = (p.epsilon <= 0.01) ? 1.0 : 0.5;  // damping on u-updates
  int iterations = 0;
  double change = 0.0;
  bool converged = (p.epsilon == 0.0);
  for (int it = 0; it < 500 && !converged; ++it) {
    ++iterations;
    v = solve_v_given_u(u, std::move(v), grid, p);
    Vec V(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      V[static_cast<size_t>(i)] = V0[static_cast<size_t>(i)] + p.epsilon * p.phi.phi(v[static_cast<size_t>(i)]);
    level = level_bisect(V, h, grid.half_width(), 1e-13);
    const Vec u_new = positive_part_density(level, V);
    change = 0.0;
    for (int i = 0; i < n; ++i) {
      const size_t k = static_cast<size_t>(i);
      const double du = u_new[k] - u[k];
      change += du * du;
      u[k] = (1.0 - omega) * u[k] + omega * u_new[k];
    }
    change = std::sqrt(change * h);
    if (change <= tol) converged = true;
  }
  if (!converged && p.epsilon > 0.0)
    throw SolverError("solve_stationary: no convergence in 500 outer iterations (last change " +
                      std::to_string(change) + ")");

  // undamped polish so that u is exactly the positive part of the final (U, v)
  for (int it = 0; it < 60; ++it) {
    v = solve_v_given_u(u, std::move(v), grid, p);
    Vec V(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      V[static_cast<size_t>(i)] = V0[static_cast<size_t>(i)] + p.epsilon * p.phi.phi(v[static_cast<size_t>(i)]);
    level = level_bisect(V, h, grid.half_width(), 1e-13);
    Vec u_new = positive_part_density(level, V);
    double delta = 0.0;
    for (int i = 0; i < n; ++i)
      delta = std::max(delta, std::abs(u_new[static_cast<size_t>(i)] - u[static_cast<size_t>(i)]));
    u = std::move(u_new);
    if (delta < 1e-15) break;
  }

  double mass = 0.0;
  for (double ui : u) mass += ui;
  mass *= h;

  SystemState state(ProbabilityDensity::from_values(u, grid), ConcentrationField(v, grid));
  StationaryResult out{state,
                       level,
                       stationary_el_residual(state, p),
                       std::abs(mass - 1.0),
                       iterations,
                       *std::max_element(v.begin(), v.end()),
                       convexity_ok};
  return out;
}

StationaryBoundsReport verify_stationary_bounds(const StationaryResult& r, const ModelParams& p) {
  StationaryBoundsReport report{};
  const Grid1D& g = r.state.grid();

  // uncoupled level U_0
  Vec V0(static_cast<size_t>(g.n_cells()));
  for (int i = 0; i < g.n_cells(); ++i) V0[static_cast<size_t>(i)] = p.potential(g.center(i));
  const double u0_level = level_bisect(V0, g.spacing(), g.half_width(), 1e-13);

  const double max_u = *std::max_element(r.state.u.values().begin(), r.state.u.values().end());
  const double rhs = u0_level - p.epsilon * r.v_sup * p.dphi0();
  report.bounds.push_back({"u_sup_le_U0_minus_eps_V_dphi0", max_u, rhs, max_u <= rhs + 1e-12});

  // |Dv_inf| / eps across the halving sweep
  auto grad_sup = [](const SystemState& s) {
    double m = 0.0;
    const double h = s.grid().spacing();
    for (int i = 0; i + 1 < s.grid().n_cells(); ++i)
      m = std::max(m, std::abs(s.v.value(i + 1) - s.v.value(i)) / h);
    return m;
  };
  auto hess_sup = [](const SystemState& s) {
    const auto lap = apply_neumann_laplacian(s.v.values(), s.grid().spacing());
    double m = 0.0;
    for (double x : lap) m = std::max(m, std::abs(x));
    return m;
  };
  if (p.epsilon > 0.0) {
    for (double eps : {p.epsilon, 0.5 * p.epsilon, 0.25 * p.epsilon}) {
      ModelParams q(eps, p.kappa, p.phi, p.potential);
      const StationaryResult sub = solve_stationary(q, g);
      report.grad_ratio_sweep.push_back(grad_sup(sub.state) / eps);
      report.hess_ratio_sweep.push_back(hess_sup(sub.state) / eps);
    }
    const double lo =
        *std::min_element(report.grad_ratio_sweep.begin(), report.grad_ratio_sweep.end());
    const double hi =
        *std::max_element(report.grad_ratio_sweep.begin(), report.grad_ratio_sweep.end());
    report.grad_ratios_within_factor2 = hi <= 2.0 * lo;
    report.bounds.push_back({"grad_v_linear_in_eps", hi, 2.0 * lo, report.grad_ratios_within_factor2});
  } else {
    report.grad_ratios_within_factor2 = true;
  }
  return report;
}

bool StationaryBoundsReport::all_pass() const {
  for (const auto& b : bounds)
    if (!b.pass) return false;
  return true;
}

}  // namespace chemoflow
