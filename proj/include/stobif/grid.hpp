#pragma once

#include <string>
#include <vector>

namespace stobif {

enum class BoundaryPolicy { reflecting, absorbing };

std::string to_string(BoundaryPolicy policy);
BoundaryPolicy boundary_policy_from_string(const std::string& s);

/// Uniform cell-centered 1-D mesh on (x_min, x_max) with n cells.
/// Cell centers sit at x_min + (i + 1/2) h, interfaces at x_min + i h.
struct Grid {
    double x_min = 0.0;
    double x_max = 0.0;
    int n = 0;
    double h = 0.0;
    BoundaryPolicy policy = BoundaryPolicy::reflecting;

    double node(int i) const { return x_min + (i + 0.5) * h; }
    double interface(int i) const { return x_min + i * h; }
    double span() const { return x_max - x_min; }
    double center() const { return 0.5 * (x_min + x_max); }
    double half_width() const { return 0.5 * span(); }
    std::vector<double> nodes() const;
};

/// Validates and builds a Grid. Requires x_min < x_max and n >= 16.
Grid build_grid(double x_min, double x_max, int n, BoundaryPolicy policy);

} // namespace stobif
