#include "chemoflow/grid.hpp"

#include <string>

namespace chemoflow {

Grid1D::Grid1D(double half_width, int n_cells)
    : half_width_(half_width), n_(n_cells), h_(2.0 * half_width / n_cells) {
  if (half_width <= 0.0) throw std::invalid_argument("Grid1D: half_width must be positive");
  if (n_cells < kMinCells)
    throw std::invalid_argument("Grid1D: n_cells below minimum resolution " +
                                std::to_string(kMinCells));
  centers_.resize(static_cast<size_t>(n_));
  edges_.resize(static_cast<size_t>(n_) + 1);
  for (int i = 0; i <= n_; ++i) edges_[static_cast<size_t>(i)] = -half_width_ + i * h_;
  for (int i = 0; i < n_; ++i) centers_[static_cast<size_t>(i)] = -half_width_ + (i + 0.5) * h_;
}

Grid1D build_grid(double half_width, int n_cells) { return Grid1D(half_width, n_cells); }

}  // namespace chemoflow
