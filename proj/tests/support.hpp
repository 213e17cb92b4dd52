#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "chemoflow/model.hpp"
#include "chemoflow/state.hpp"

namespace testsupport {

using namespace chemoflow;

inline ModelParams make_params(double eps, double kappa, double lambda0,
                               const std::string& family = "rational") {
  return ModelParams(eps, kappa, ResponseFunction::from_name(family),
                     Confinement::quadratic(lambda0));
}

inline ProbabilityDensity gaussian_density(const Grid1D& g, double mean, double sigma) {
  return ProbabilityDensity::from_function(
      [mean, sigma](double x) {
        const double z = (x - mean) / sigma;
        return std::exp(-0.5 * z * z);
      },
      g);
}

inline ConcentrationField gaussian_field(const Grid1D& g, double amp, double mean, double sigma) {
  std::vector<double> v(static_cast<size_t>(g.n_cells()));
  for (int i = 0; i < g.n_cells(); ++i) {
    const double z = (g.center(i) - mean) / sigma;
    v[static_cast<size_t>(i)] = amp * std::exp(-0.5 * z * z);
  }
  return ConcentrationField(std::move(v), g);
}

/// Random mixture density, deterministic under the caller's engine.
inline ProbabilityDensity random_density(const Grid1D& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> mean_d(-g.half_width() / 3, g.half_width() / 3);
  std::uniform_real_distribution<double> sigma_d(0.25, 1.0);
  std::uniform_real_distribution<double> w_d(0.2, 1.0);
  const double m1 = mean_d(rng), m2 = mean_d(rng);
  const double s1 = sigma_d(rng), s2 = sigma_d(rng);
  const double w1 = w_d(rng), w2 = w_d(rng);
  return ProbabilityDensity::from_function(
      [=](double x) {
        const double z1 = (x - m1) / s1, z2 = (x - m2) / s2;
        return w1 * std::exp(-0.5 * z1 * z1) + w2 * std::exp(-0.5 * z2 * z2);
      },
      g);
}

inline ConcentrationField random_field(const Grid1D& g, std::mt19937& rng, double amp = 0.5) {
  std::uniform_real_distribution<double> mean_d(-g.half_width() / 3, g.half_width() / 3);
  std::uniform_real_distribution<double> sigma_d(0.3, 1.2);
  std::uniform_real_distribution<double> amp_d(0.1 * amp, amp);
  const double m1 = mean_d(rng), s1 = sigma_d(rng), a1 = amp_d(rng);
  const double m2 = mean_d(rng), s2 = sigma_d(rng), a2 = amp_d(rng);
  std::vector<double> v(static_cast<size_t>(g.n_cells()));
  for (int i = 0; i < g.n_cells(); ++i) {
    const double x = g.center(i);
    const double z1 = (x - m1) / s1, z2 = (x - m2) / s2;
    v[static_cast<size_t>(i)] = a1 * std::exp(-0.5 * z1 * z1) + a2 * std::exp(-0.5 * z2 * z2);
  }
  return ConcentrationField(std::move(v), g);
}

/// Discrete cosine expansion in the Neumann eigenbasis cos(k pi (i+1/2)/n);
/// O(n^2), test-only.
inline std::vector<double> neumann_cosine_coeffs(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> c(static_cast<size_t>(n), 0.0);
  constexpr double pi = 3.14159265358979323846;
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += v[static_cast<size_t>(i)] * std::cos(pi * k * (i + 0.5) / n);
    c[static_cast<size_t>(k)] = s * ((k == 0) ? 1.0 / n : 2.0 / n);
  }
  return c;
}

inline std::vector<double> neumann_cosine_synthesize(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  std::vector<double> v(static_cast<size_t>(n), 0.0);
  constexpr double pi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      s += c[static_cast<size_t>(k)] * std::cos(pi * k * (i + 0.5) / n);
    v[static_cast<size_t>(i)] = s;
  }
  return v;
}

inline double l1_diff(const ProbabilityDensity& a, const ProbabilityDensity& b) {
  double s = 0.0;
  for (int i = 0; i < a.grid().n_cells(); ++i) s += std::abs(a.value(i) - b.value(i));
  return s * a.grid().spacing();
}

}  // namespace testsupport
