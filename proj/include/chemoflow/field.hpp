#pragma once

#include <vector>

#include "chemoflow/grid.hpp"

namespace chemoflow {

/// Negative excursions of the concentration larger than this are flagged by
/// the monitors (the field itself is never clamped).
inline constexpr double kNegativityTol = 1e-9;

/// Square-integrable grid function (signal concentration).
class ConcentrationField {
public:
  ConcentrationField(std::vector<double> values, const Grid1D& grid);

  static ConcentrationField zero(const Grid1D& grid);

  const Grid1D& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double value(int i) const { return values_[static_cast<size_t>(i)]; }

  double min_value() const;

  /// sqrt(sum v_i^2 h)
  double l2_norm() const;

  /// Edge-difference norms used throughout: sqrt(sum_e ((v_{i+1}-v_i)/h)^2 h)
  double grad_l2_norm() const;
  /// sqrt(l2^2 + grad_l2^2)
  double w12_norm() const;
  /// (sum_e |(v_{i+1}-v_i)/h|^q h)^{1/q}
  double grad_lq_norm(double q) const;

private:
  Grid1D grid_;
  std::vector<double> values_;
};

}  // namespace chemoflow
