#pragma once

#include <functional>
#include <vector>

#include "chemoflow/density.hpp"
#include "chemoflow/state.hpp"

namespace chemoflow {

/// Product-space distance sqrt(W2^2 + ||v1 - v2||_2^2).
struct CompoundDistance {
  double w2_part;
  double l2_part;
  double total;
};

/// Exact 1-D quadratic Wasserstein distance via quantile functions sampled at
/// max(m1, m2) shared midpoint nodes.
double w2(const ProbabilityDensity& u1, const ProbabilityDensity& u2);

/// Squared variant (avoids the sqrt when summing step increments).
double w2_squared(const ProbabilityDensity& u1, const ProbabilityDensity& u2);

/// Weighted point masses for the brute-force oracle.
struct Histogram {
  std::vector<double> positions;
  std::vector<double> masses;
};

/// Optimal transport cost between two histograms of equal total mass by the
/// north-west-corner rule (optimal in 1-D for convex costs after sorting).
/// Returns sqrt(sum pi_ij (x_i - y_j)^2).
double w2_bruteforce(const Histogram& a, const Histogram& b);

CompoundDistance compound_dist(const SystemState& a, const SystemState& b);

/// Image of u under a strictly increasing map, computed on quantiles.
ProbabilityDensity pushforward(const ProbabilityDensity& u,
                               const std::function<double(double)>& map);

}  // namespace chemoflow
