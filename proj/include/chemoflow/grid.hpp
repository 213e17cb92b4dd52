#pragma once

#include <stdexcept>
#include <vector>

namespace chemoflow {

/// Uniform cell-centered grid on [-R, R].
///
/// Cell centers sit at x_i = -R + (i + 1/2) h with h = 2R/n; cell edges at
/// e_i = -R + i h.  All quadrature in the library is the midpoint rule on
/// this grid, so a grid function f integrates as sum_i f_i * h.
class Grid1D {
public:
  Grid1D(double half_width, int n_cells);

  double half_width() const { return half_width_; }
  int n_cells() const { return n_; }
  double spacing() const { return h_; }

  double center(int i) const { return centers_[static_cast<size_t>(i)]; }
  double edge(int i) const { return edges_[static_cast<size_t>(i)]; }
  const std::vector<double>& centers() const { return centers_; }
  const std::vector<double>& edges() const { return edges_; }

  bool same_as(const Grid1D& other) const {
    return n_ == other.n_ && half_width_ == other.half_width_;
  }

private:
  double half_width_;
  int n_;
  double h_;
  std::vector<double> centers_;
  std::vector<double> edges_;
};

/// Minimum resolution accepted by build_grid.
inline constexpr int kMinCells = 16;

/// Construct a uniform grid; rejects R <= 0 and n below kMinCells.
Grid1D build_grid(double half_width, int n_cells);

}  // namespace chemoflow
