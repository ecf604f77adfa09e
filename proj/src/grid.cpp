#include "stobif/grid.hpp"

#include <sstream>

#include "stobif/errors.hpp"

namespace stobif {

std::string to_string(BoundaryPolicy policy) {
    return policy == BoundaryPolicy::reflecting ? "reflecting" : "absorbing";
}

BoundaryPolicy boundary_policy_from_string(const std::string& s) {
    if (s == "reflecting")
        return BoundaryPolicy::reflecting;
    if (s == "absorbing")
        return BoundaryPolicy::absorbing;
    throw ConfigError("unknown boundary policy \"" + s +
                      "\"; valid: reflecting absorbing");
}

std::vector<double> Grid::nodes() const {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = node(i);
    return xs;
}

Grid build_grid(double x_min, double x_max, int n, BoundaryPolicy policy) {
    if (!(x_min < x_max)) {
        std::ostringstream msg;
        msg << "invalid range: x_min " << x_min << " must be < x_max " << x_max;
        throw ConfigError(msg.str());
    }
    if (n < 16)
        throw ConfigError("too few cells: n = " + std::to_string(n) +
                          ", need n >= 16");
    Grid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n = n;
    g.h = (x_max - x_min) / n;
    g.policy = policy;
    return g;
}

} // namespace stobif
