#include "chemoflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chemoflow/kernels.hpp"
#include "chemoflow/quadrature.hpp"

namespace chemoflow {

DecayFit fit_series(const std::vector<double>& t, const std::vector<double>& y, double t_begin,
                    double t_end, double reference) {
  if (t.size() != y.size()) throw std::invalid_argument("fit_series: size mismatch");
  // restrict to the window and to the last positive prefix
  std::vector<double> ts, ls;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_begin || t[i] > t_end) continue;
    if (!(y[i] > 0.0)) break;  // shrink to the positive prefix
    ts.push_back(t[i]);
    ls.push_back(std::log(y[i]));
  }
  if (ts.size() < 10) throw std::invalid_argument("fit_series: fewer than 10 usable points");

  const double n = double(ts.size());
  double st = 0, sl = 0, stt = 0, stl = 0, sll = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sl += ls[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * ls[i];
    sll += ls[i] * ls[i];
  }
  const double slope = (n * stl - st * sl) / (n * stt - st * st);
  const double intercept = (sl - slope * st) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_l = sl / n;
  for (size_t i = 0; i < ts.size(); ++i) {
    const double fit = intercept + slope * ts[i];
    ss_res += (ls[i] - fit) * (ls[i] - fit);
    ss_tot += (ls[i] - mean_l) * (ls[i] - mean_l);
  }
  DecayFit out{};
  out.t_begin = ts.front();
  out.t_end = ts.back();
  out.rate = -slope;
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  out.reference = reference;
  out.points = static_cast<int>(ts.size());
  return out;
}

DecayFit fit_decay_rate(const TrajectoryRecord& traj, DecayQuantity q, double t_begin,
                        double t_end, const ModelParams& p) {
  std::vector<double> t, y;
  t.reserve(traj.steps.size());
  y.reserve(traj.steps.size());
  for (const auto& s : traj.steps) {
    t.push_back(s.time);
    switch (q) {
      case DecayQuantity::kL:
        y.push_back(s.l_u + s.l_v);
        break;
      case DecayQuantity::kLu:
        y.push_back(s.l_u);
        break;
      case DecayQuantity::kLv:
        y.push_back(s.l_v);
        break;
      case DecayQuantity::kHGap:
        y.push_back(s.H - traj.H_stationary);
        break;
    }
  }
  return fit_series(t, y, t_begin, t_end, 2.0 * reference_rate(p));
}

double reference_rate(const ModelParams& p) { return std::min(p.kappa, p.potential.lambda0()); }

double discrete_rate(double a, double tau) {
  if (!(a > 0.0) || !(tau > 0.0)) throw std::invalid_argument("discrete_rate: a, tau must be positive");
  return std::log1p(a * tau) / tau;
}

double DecayConstants::discrete(double rate, double tau) const { return discrete_rate(rate, tau); }

double DecayConstants::exponent_Q(double q) const { return lq_exponent(q); }

double DecayConstants::y_q(double q) const {
  return std::tgamma(1.0 - lq_exponent(q)) * grad_heat_kernel_Lq(q);
}

DecayConstants decay_constants(const ModelParams& p, double v0_l65_norm) {
  DecayConstants c{};
  c.kappa = p.kappa;
  // Y_q = Gamma(1 - Q) ||D H_1||_{L^q};  Q(1) = 1/2, Q(6/5) = 3/4
  auto grad_h1_lq = [](double q) {
    constexpr double pi = 3.14159265358979323846;
    const double integral = quad::panels(
        [q, pi](double r) {
          const double g = std::pow(4.0 * pi, -1.5) * 0.5 * r * std::exp(-r * r / 4.0);
          return 4.0 * pi * r * r * std::pow(g, q);
        },
        0.0, 30.0, 48);
    return std::pow(integral, 1.0 / q);
  };
  c.y1 = std::tgamma(0.5) * grad_h1_lq(1.0);
  c.y65 = std::tgamma(0.25) * grad_h1_lq(1.2);
  c.a = (1.0 + p.kappa) * c.y1;
  // int_0^inf (1+kappa)^{-s} s^{-3/4} ds = Gamma(1/4) / ln(1+kappa)^{1/4}
  const double tail_integral = std::tgamma(0.25) / std::pow(std::log1p(p.kappa), 0.25);
  c.m1 = std::abs(p.dphi0()) * c.y65 * std::pow(1.0 + p.kappa, 0.75) * tail_integral;
  c.t1 = (v0_l65_norm > 0.0 && c.m1 > 0.0)
             ? std::max(0.0, std::log(c.a * v0_l65_norm / c.m1) / p.kappa)
             : 0.0;
  return c;
}

GradientControlReport gradient_control_check(const TrajectoryRecord& traj,
                                             const DecayConstants& c, double epsilon,
                                             double tau) {
  GradientControlReport rep{};
  rep.t1 = c.t1;
  rep.m1 = c.m1;
  rep.a = c.a;
  rep.time_bound_all_steps = true;
  rep.control_past_t1 = true;
  rep.first_violation_step = -1;
  rep.caveat = "3-D-constant heuristic applied to 1-D run";
  const double kappa_tau = discrete_rate(c.kappa, tau);
  int step_index = 0;
  for (const auto& s : traj.steps) {
    ++step_index;
    const double envelope =
        c.a * traj.v0_l65_norm * std::exp(-kappa_tau * s.time) / std::sqrt(s.time) +
        epsilon * c.m1;
    if (s.grad_v_l65 > envelope) {
      rep.time_bound_all_steps = false;
      if (rep.first_violation_step < 0) rep.first_violation_step = step_index;
    }
    if (s.time >= c.t1 && s.grad_v_l65 > 2.0 * c.m1) {
      rep.control_past_t1 = false;
      if (rep.first_violation_step < 0) rep.first_violation_step = step_index;
    }
  }
  return rep;
}

}  // namespace chemoflow
