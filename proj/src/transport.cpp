#include "chemoflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chemoflow {

double w2_squared(const ProbabilityDensity& u1, const ProbabilityDensity& u2) {
  if (!u1.grid().same_as(u2.grid())) throw std::invalid_argument("w2: mismatched grids");
  const int m = u1.grid().n_cells();
  const std::vector<double>& x1 = u1.quantile();
  const std::vector<double>& x2 = u2.quantile();
  double s = 0.0;
  for (int j = 0; j < m; ++j) {
    const double d = x1[static_cast<size_t>(j)] - x2[static_cast<size_t>(j)];
    s += d * d;
  }
  return s / m;
}

double w2(const ProbabilityDensity& u1, const ProbabilityDensity& u2) {
  return std::sqrt(w2_squared(u1, u2));
}

double w2_bruteforce(const Histogram& a, const Histogram& b) {
  if (a.positions.size() != a.masses.size() || b.positions.size() != b.masses.size())
    throw std::invalid_argument("w2_bruteforce: positions/masses size mismatch");
  const double ma = std::accumulate(a.masses.begin(), a.masses.end(), 0.0);
  const double mb = std::accumulate(b.masses.begin(), b.masses.end(), 0.0);
  if (std::abs(ma - mb) > 1e-9 * std::max(1.0, std::abs(ma)))
    throw std::invalid_argument("w2_bruteforce: total masses differ");

  auto sorted_indices = [](const Histogram& hist) {
    std::vector<size_t> idx(hist.positions.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](size_t i, size_t j) { return hist.positions[i] < hist.positions[j]; });
    return idx;
  };
  const auto ia = sorted_indices(a);
  const auto ib = sorted_indices(b);

  // north-west corner: march through both sorted mass lists
  double cost = 0.0;
  size_t i = 0, j = 0;
  double ra = ia.empty() ? 0.0 : a.masses[ia[0]];
  double rb = ib.empty() ? 0.0 : b.masses[ib[0]];
  while (i < ia.size() && j < ib.size()) {
    const double moved = std::min(ra, rb);
    const double d = a.positions[ia[i]] - b.positions[ib[j]];
    cost += moved * d * d;
    ra -= moved;
    rb -= moved;
    if (ra <= 1e-15 * ma) {
      ++i;
      if (i < ia.size()) ra = a.masses[ia[i]];
    }
    if (rb <= 1e-15 * mb) {
      ++j;
      if (j < ib.size()) rb = b.masses[ib[j]];
    }
  }
  return std::sqrt(std::max(cost, 0.0) / ma);
}

CompoundDistance compound_dist(const SystemState& a, const SystemState& b) {
  if (!a.grid().same_as(b.grid())) throw std::invalid_argument("compound_dist: mismatched grids");
  CompoundDistance d{};
  d.w2_part = w2(a.u, b.u);
  double s = 0.0;
  for (int i = 0; i < a.grid().n_cells(); ++i) {
    const double dv = a.v.value(i) - b.v.value(i);
    s += dv * dv;
  }
  d.l2_part = std::sqrt(s * a.grid().spacing());
  d.total = std::sqrt(d.w2_part * d.w2_part + d.l2_part * d.l2_part);
  return d;
}

ProbabilityDensity pushforward(const ProbabilityDensity& u,
                               const std::function<double(double)>& map) {
  std::vector<double> X = u.quantile();
  for (double& x : X) x = map(x);
  for (size_t j = 0; j + 1 < X.size(); ++j)
    if (!(X[j + 1] > X[j]))
      throw std::invalid_argument("pushforward: map is not strictly increasing on the support");
  return density_from_quantiles(X, u.grid());
}

}  // namespace chemoflow
