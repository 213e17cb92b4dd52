#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace chemoflow::quad {

/// 16-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 8> kGl16Nodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
inline constexpr std::array<double, 8> kGl16Weights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

inline double gl16(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), s = 0.5 * (b - a);
  double acc = 0.0;
  for (size_t i = 0; i < 8; ++i)
    acc += kGl16Weights[i] * (f(c - s * kGl16Nodes[i]) + f(c + s * kGl16Nodes[i]));
  return acc * s;
}

/// Composite rule with n equal panels.
inline double panels(const std::function<double(double)>& f, double a, double b, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += gl16(f, a + (b - a) * i / n, a + (b - a) * (i + 1) / n);
  return acc;
}

/// Composite rule with geometrically graded panels from a singular endpoint
/// at a: breakpoints a + (b-a) 2^{-j}.
inline double graded_panels(const std::function<double(double)>& f, double a, double b,
                            int n_levels) {
  double acc = 0.0;
  double hi = b;
  for (int j = 1; j <= n_levels; ++j) {
    const double lo = a + (b - a) * std::pow(2.0, -j);
    acc += gl16(f, lo, hi);
    hi = lo;
  }
  acc += gl16(f, a, hi);
  return acc;
}

}  // namespace chemoflow::quad
