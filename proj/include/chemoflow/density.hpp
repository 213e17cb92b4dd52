#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "chemoflow/grid.hpp"

namespace chemoflow {

/// Values below this are treated as vacuum when inverting the CDF or taking
/// logarithms; it also caps quantile slopes on empty cells.
inline constexpr double kDensityFloor = 1e-12;

/// Mass defect tolerated by the checked constructor.
inline constexpr double kMassTol = 1e-10;

/// Nonnegative grid function with unit mass under midpoint quadrature.
///
/// The dual representation is the quantile vector X(s_j) at the midpoint
/// nodes s_j = (j + 1/2)/m, obtained by inverting the piecewise-linear
/// edge CDF.  quantile() caches the default resolution m = n_cells.
class ProbabilityDensity {
public:
  /// Normalizes nonnegative samples to unit mass; throws if they sum to zero.
  static ProbabilityDensity from_samples(std::vector<double> values, const Grid1D& grid);

  /// Accepts values whose mass is already 1 within kMassTol, then rescales
  /// exactly; throws otherwise.
  static ProbabilityDensity from_values(std::vector<double> values, const Grid1D& grid);

  /// Samples f at cell centers and normalizes.
  static ProbabilityDensity from_function(const std::function<double(double)>& f,
                                          const Grid1D& grid);

  const Grid1D& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double value(int i) const { return values_[static_cast<size_t>(i)]; }

  double mass() const;
  double second_moment() const;

  /// Quantile vector at m midpoint nodes, strictly increasing where u > 0.
  std::vector<double> quantile(int m) const;
  /// Default-resolution quantiles (m = n_cells), cached.
  const std::vector<double>& quantile() const;

private:
  ProbabilityDensity(std::vector<double> values, const Grid1D& grid);

  Grid1D grid_;
  std::vector<double> values_;
  mutable std::optional<std::vector<double>> quantile_cache_;
};

/// Rebuilds a density from a strictly increasing quantile vector at
/// midpoint nodes: the piecewise-linear CDF through (X_j, s_j), with the end
/// half-node masses extrapolated at the adjacent slope, is differenced at
/// the cell edges.  Conservative and second order for smooth densities.
ProbabilityDensity density_from_quantiles(const std::vector<double>& quantiles,
                                          const Grid1D& grid);

/// Free-function form of the normalized constructor.
inline ProbabilityDensity density_from_function(const std::function<double(double)>& f,
                                                const Grid1D& grid) {
  return ProbabilityDensity::from_function(f, grid);
}

/// Quantile vector at m nodes (free-function form of ProbabilityDensity::quantile).
std::vector<double> quantile_of(const ProbabilityDensity& u, int m);

}  // namespace chemoflow
