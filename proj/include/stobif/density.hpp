#pragma once

#include <vector>

#include "stobif/grid.hpp"

namespace stobif {

/// Discretized probability density on a Grid at one instant.
struct DensityField {
    Grid grid;
    std::vector<double> values; // density per unit length, one per cell
    double time = 0.0;

    /// h * sum(values): total probability mass.
    double mass() const;

    /// h * sum(x_i * values[i]): raw (unnormalized) first moment.
    double raw_first_moment() const;

    /// h * sum((x_i - c)^2 * values[i]) / mass: central second moment.
    double central_second_moment() const;
};

} // namespace stobif
