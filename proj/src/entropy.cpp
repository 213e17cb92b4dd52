#include "chemoflow/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chemoflow/kernels.hpp"
#include "chemoflow/transport.hpp"

namespace chemoflow {

namespace {

double dirichlet_part(const std::vector<double>& v, double h) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    const double d = v[i + 1] - v[i];
    s += d * d;
  }
  return 0.5 * s / h;
}

}  // namespace

EntropyBreakdown entropy_H(const SystemState& s, const ModelParams& p) {
  const Grid1D& g = s.grid();
  const double h = g.spacing();
  EntropyBreakdown b{};
  for (int i = 0; i < g.n_cells(); ++i) {
    const double u = s.u.value(i);
    const double v = s.v.value(i);
    const double x = g.center(i);
    b.internal += 0.5 * u * u;
    b.potential += u * p.potential(x);
    b.decay += 0.5 * p.kappa * v * v;
    b.coupling += u * p.phi.phi(v);
  }
  b.internal *= h;
  b.potential *= h;
  b.decay *= h;
  b.coupling *= h * p.epsilon;
  b.dirichlet = dirichlet_part(s.v.values(), h);
  b.total = b.internal + b.potential + b.dirichlet + b.decay + b.coupling;
  return b;
}

double boltzmann_E(const ProbabilityDensity& u) {
  double s = 0.0;
  for (double ui : u.values())
    if (ui > kDensityFloor) s += ui * std::log(ui);
  return s * u.grid().spacing();
}

double dirichlet_F(const ConcentrationField& v, double kappa) {
  const double h = v.grid().spacing();
  double s2 = 0.0;
  for (double vi : v.values()) s2 += vi * vi;
  return dirichlet_part(v.values(), h) + 0.5 * kappa * s2 * h;
}

std::vector<double> perturbed_potential(const SystemState& stationary, const ModelParams& p) {
  const Grid1D& g = stationary.grid();
  std::vector<double> w_eps(static_cast<size_t>(g.n_cells()));
  for (int i = 0; i < g.n_cells(); ++i)
    w_eps[static_cast<size_t>(i)] =
        p.potential(g.center(i)) + p.epsilon * p.phi.phi(stationary.v.value(i));
  return w_eps;
}

double stationary_el_residual(const SystemState& stationary, const ModelParams& p) {
  const Grid1D& g = stationary.grid();
  const std::vector<double> lap = apply_neumann_laplacian(stationary.v.values(), g.spacing());
  double s = 0.0;
  for (int i = 0; i < g.n_cells(); ++i) {
    const double r = lap[static_cast<size_t>(i)] + p.kappa * stationary.v.value(i) +
                     p.epsilon * stationary.u.value(i) * p.phi.dphi(stationary.v.value(i));
    s += r * r;
  }
  return std::sqrt(s * g.spacing());
}

LyapunovBreakdown lyapunov(const SystemState& s, const SystemState& stationary,
                           const ModelParams& p, double max_el_residual) {
  if (!s.grid().same_as(stationary.grid()))
    throw std::invalid_argument("lyapunov: mismatched grids");
  const double res = stationary_el_residual(stationary, p);
  if (res > max_el_residual)
    throw std::invalid_argument("lyapunov: stationary pair fails the EL residual tolerance");

  const Grid1D& g = s.grid();
  const double h = g.spacing();
  const std::vector<double> w_eps = perturbed_potential(stationary, p);

  LyapunovBreakdown out{};
  std::vector<double> dv(static_cast<size_t>(g.n_cells()));
  for (int i = 0; i < g.n_cells(); ++i) {
    const size_t k = static_cast<size_t>(i);
    const double u = s.u.value(i), ui = stationary.u.value(i);
    const double v = s.v.value(i), vi = stationary.v.value(i);
    out.l_u += 0.5 * (u * u - ui * ui) + w_eps[k] * (u - ui);
    dv[k] = v - vi;
    out.l_v += 0.5 * p.kappa * dv[k] * dv[k];
    out.l_star += u * (p.phi.phi(v) - p.phi.phi(vi)) - ui * p.phi.dphi(vi) * dv[k];
  }
  out.l_u *= h;
  out.l_v = out.l_v * h + dirichlet_part(dv, h);
  out.l_star *= h;

  const double gap = entropy_H(s, p).total - entropy_H(stationary, p).total;
  out.decomposition_residual = gap - (out.l_u + out.l_v + p.epsilon * out.l_star);
  return out;
}

double dissipation_Du(const SystemState& s, const SystemState& stationary, const ModelParams& p) {
  const Grid1D& g = s.grid();
  const int n = g.n_cells();
  const double h = g.spacing();
  const std::vector<double> w_eps = perturbed_potential(stationary, p);

  // potentials whose gradients drive the two integrands
  std::vector<double> a(static_cast<size_t>(n)), c(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const size_t k = static_cast<size_t>(i);
    a[k] = s.u.value(i) + w_eps[k];
    c[k] = p.phi.phi(s.v.value(i)) - p.phi.phi(stationary.v.value(i));
  }

  auto support_gradient = [&](const std::vector<double>& f, int i) {
    // central difference where both neighbours carry mass, one-sided at the
    // support edge so the free boundary does not leak into the integrand
    const bool lm = i > 0 && s.u.value(i - 1) > kDensityFloor;
    const bool rm = i + 1 < n && s.u.value(i + 1) > kDensityFloor;
    const size_t k = static_cast<size_t>(i);
    if (lm && rm) return (f[k + 1] - f[k - 1]) / (2.0 * h);
    if (rm) return (f[k + 1] - f[k]) / h;
    if (lm) return (f[k] - f[k - 1]) / h;
    return 0.0;
  };

  double main_term = 0.0, cross_term = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.u.value(i);
    if (u <= kDensityFloor) continue;
    const double da = support_gradient(a, i);
    const double dc = support_gradient(c, i);
    main_term += u * da * da;
    cross_term += u * dc * dc;
  }
  main_term *= h;
  cross_term *= h;
  return (1.0 - 0.5 * p.epsilon) * main_term - 0.5 * p.epsilon * cross_term;
}

double dissipation_Dv(const SystemState& s, const SystemState& stationary, const ModelParams& p) {
  const Grid1D& g = s.grid();
  const int n = g.n_cells();
  const double h = g.spacing();

  std::vector<double> dv(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) dv[static_cast<size_t>(i)] = s.v.value(i) - stationary.v.value(i);
  const std::vector<double> lap = apply_neumann_laplacian(dv, h);  // = -Lap_h dv

  double main_term = 0.0, cross_term = 0.0;
  for (int i = 0; i < n; ++i) {
    const size_t k = static_cast<size_t>(i);
    const double r = -lap[k] - p.kappa * dv[k];
    main_term += r * r;
    const double q = s.u.value(i) * p.phi.dphi(s.v.value(i)) -
                     stationary.u.value(i) * p.phi.dphi(stationary.v.value(i));
    cross_term += q * q;
  }
  main_term *= h;
  cross_term *= h;
  return (1.0 - 0.5 * p.epsilon) * main_term - 0.5 * p.epsilon * cross_term;
}

double flat_convexity_modulus(const ModelParams& p) {
  const double e = p.epsilon * std::abs(p.dphi0());
  const double k = p.kappa;
  const double disc = std::sqrt((1.0 - k) * (1.0 - k) + 4.0 * e * e);
  return 0.5 * ((1.0 + k) - disc);
}

double convexity_probe(const SystemState& s0, const SystemState& s1, const ModelParams& p,
                       int n_samples) {
  if (!s0.grid().same_as(s1.grid()))
    throw std::invalid_argument("convexity_probe: mismatched grids");
  const Grid1D& g = s0.grid();
  const int n = g.n_cells();
  const double h = g.spacing();

  double dist2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double du = s1.u.value(i) - s0.u.value(i);
    const double dv = s1.v.value(i) - s0.v.value(i);
    dist2 += du * du + dv * dv;
  }
  dist2 *= h;
  if (dist2 <= 0.0) throw std::invalid_argument("convexity_probe: states coincide");

  // H along the linear interpolation, evaluated without the unit-mass guard
  auto H_at = [&](double t) {
    double total = 0.0;
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      const size_t k = static_cast<size_t>(i);
      const double u = (1.0 - t) * s0.u.value(i) + t * s1.u.value(i);
      v[k] = (1.0 - t) * s0.v.value(i) + t * s1.v.value(i);
      total += 0.5 * u * u + u * p.potential(g.center(i)) + 0.5 * p.kappa * v[k] * v[k] +
               p.epsilon * u * p.phi.phi(v[k]);
    }
    return total * h + dirichlet_part(v, h);
  };

  const double dt = 1e-3;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_samples; ++k) {
    const double t = (k + 0.5) / n_samples;
    const double second = (H_at(t + dt) - 2.0 * H_at(t) + H_at(t - dt)) / (dt * dt);
    min_ratio = std::min(min_ratio, second / dist2);
  }
  return min_ratio;
}

}  // namespace chemoflow
