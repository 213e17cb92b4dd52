#pragma once

#include <utility>

#include "chemoflow/density.hpp"
#include "chemoflow/field.hpp"

namespace chemoflow {

/// A point of the product space: cell density paired with a signal field on
/// the same grid.
struct SystemState {
  ProbabilityDensity u;
  ConcentrationField v;

  SystemState(ProbabilityDensity density, ConcentrationField field)
      : u(std::move(density)), v(std::move(field)) {
    if (!u.grid().same_as(v.grid())) throw std::invalid_argument("SystemState: grids differ");
  }

  const Grid1D& grid() const { return u.grid(); }
};

}  // namespace chemoflow
