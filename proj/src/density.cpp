#include "stobif/density.hpp"

namespace stobif {

double DensityField::mass() const {
    double sum = 0.0;
    for (double v : values)
        sum += v;
    return grid.h * sum;
}

double DensityField::raw_first_moment() const {
    double sum = 0.0;
    for (int i = 0; i < grid.n; ++i)
        sum += grid.node(i) * values[static_cast<std::size_t>(i)];
    return grid.h * sum;
}

double DensityField::central_second_moment() const {
    const double m = mass();
    if (m <= 0.0)
        return 0.0;
    const double c = raw_first_moment() / m;
    double sum = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const double d = grid.node(i) - c;
        sum += d * d * values[static_cast<std::size_t>(i)];
    }
    return grid.h * sum / m;
}

} // namespace stobif
