#include "chemoflow/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chemoflow {

namespace {

double vector_mass(const std::vector<double>& values, double h) {
  double m = 0.0;
  for (double x : values) m += x;
  return m * h;
}

}  // namespace

ProbabilityDensity::ProbabilityDensity(std::vector<double> values, const Grid1D& grid)
    : grid_(grid), values_(std::move(values)) {
  // filled eagerly so that instances are immutable and freely shareable
  quantile_cache_ = quantile(grid_.n_cells());
}

ProbabilityDensity ProbabilityDensity::from_samples(std::vector<double> values,
                                                    const Grid1D& grid) {
  if (static_cast<int>(values.size()) != grid.n_cells())
    throw std::invalid_argument("ProbabilityDensity: value count != n_cells");
  for (double x : values)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument("ProbabilityDensity: negative or non-finite sample");
  const double m = vector_mass(values, grid.spacing());
  if (m <= 0.0) throw std::invalid_argument("ProbabilityDensity: samples are identically zero");
  for (double& x : values) x /= m;
  return ProbabilityDensity(std::move(values), grid);
}

ProbabilityDensity ProbabilityDensity::from_values(std::vector<double> values,
                                                   const Grid1D& grid) {
  const double m = vector_mass(values, grid.spacing());
  if (std::abs(m - 1.0) > kMassTol)
    throw std::invalid_argument("ProbabilityDensity: mass deviates from 1 beyond tolerance");
  return from_samples(std::move(values), grid);
}

ProbabilityDensity ProbabilityDensity::from_function(const std::function<double(double)>& f,
                                                     const Grid1D& grid) {
  std::vector<double> values(static_cast<size_t>(grid.n_cells()));
  for (int i = 0; i < grid.n_cells(); ++i) {
    const double fx = f(grid.center(i));
    if (fx < 0.0) throw std::invalid_argument("ProbabilityDensity: f takes negative values");
    values[static_cast<size_t>(i)] = fx;
  }
  return from_samples(std::move(values), grid);
}

double ProbabilityDensity::mass() const { return vector_mass(values_, grid_.spacing()); }

double ProbabilityDensity::second_moment() const {
  double m2 = 0.0;
  for (int i = 0; i < grid_.n_cells(); ++i) {
    const double x = grid_.center(i);
    m2 += x * x * values_[static_cast<size_t>(i)];
  }
  return m2 * grid_.spacing();
}

std::vector<double> ProbabilityDensity::quantile(int m) const {
  if (m < 1) throw std::invalid_argument("quantile: node count must be positive");
  const int n = grid_.n_cells();
  const double h = grid_.spacing();
  // edge CDF; the final entry is pinned to 1 exactly
  std::vector<double> cdf(static_cast<size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i)
    cdf[static_cast<size_t>(i) + 1] = cdf[static_cast<size_t>(i)] + values_[static_cast<size_t>(i)] * h;
  cdf[static_cast<size_t>(n)] = 1.0;

  std::vector<double> X(static_cast<size_t>(m));
  int cell = 0;
  for (int j = 0; j < m; ++j) {
    const double s = (j + 0.5) / m;
    while (cell < n - 1 && cdf[static_cast<size_t>(cell) + 1] < s) ++cell;
    const double u_cell = std::max(values_[static_cast<size_t>(cell)], kDensityFloor);
    const double x = grid_.edge(cell) + (s - cdf[static_cast<size_t>(cell)]) / u_cell;
    X[static_cast<size_t>(j)] = std::min(x, grid_.edge(cell + 1));
  }
  return X;
}

const std::vector<double>& ProbabilityDensity::quantile() const {
  if (!quantile_cache_) quantile_cache_ = quantile(grid_.n_cells());
  return *quantile_cache_;
}

ProbabilityDensity density_from_quantiles(const std::vector<double>& quantiles,
                                          const Grid1D& grid) {
  const int m = static_cast<int>(quantiles.size());
  if (m < 2) throw std::invalid_argument("density_from_quantiles: need at least two nodes");
  for (int j = 0; j + 1 < m; ++j)
    if (!(quantiles[static_cast<size_t>(j) + 1] > quantiles[static_cast<size_t>(j)]))
      throw std::invalid_argument("density_from_quantiles: nodes not strictly increasing");

  // CDF support points: endpoints extrapolated half a node at the adjacent slope
  std::vector<double> px(static_cast<size_t>(m) + 2), ps(static_cast<size_t>(m) + 2);
  px[0] = quantiles[0] - 0.5 * (quantiles[1] - quantiles[0]);
  ps[0] = 0.0;
  for (int j = 0; j < m; ++j) {
    px[static_cast<size_t>(j) + 1] = quantiles[static_cast<size_t>(j)];
    ps[static_cast<size_t>(j) + 1] = (j + 0.5) / m;
  }
  px[static_cast<size_t>(m) + 1] =
      quantiles[static_cast<size_t>(m) - 1] +
      0.5 * (quantiles[static_cast<size_t>(m) - 1] - quantiles[static_cast<size_t>(m) - 2]);
  ps[static_cast<size_t>(m) + 1] = 1.0;

  auto cdf_at = [&](double x) {
    if (x <= px.front()) return 0.0;
    if (x >= px.back()) return 1.0;
    const auto it = std::upper_bound(px.begin(), px.end(), x);
    const size_t k = static_cast<size_t>(it - px.begin()) - 1;
    const double t = (x - px[k]) / (px[k + 1] - px[k]);
    return ps[k] + t * (ps[k + 1] - ps[k]);
  };

  const int n = grid.n_cells();
  std::vector<double> values(static_cast<size_t>(n));
  double prev = cdf_at(grid.edge(0));
  for (int i = 0; i < n; ++i) {
    const double next = cdf_at(grid.edge(i + 1));
    values[static_cast<size_t>(i)] = std::max(next - prev, 0.0) / grid.spacing();
    prev = next;
  }
  return ProbabilityDensity::from_samples(std::move(values), grid);
}

std::vector<double> quantile_of(const ProbabilityDensity& u, int m) { return u.quantile(m); }

}  // namespace chemoflow
