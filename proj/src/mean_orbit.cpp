#include "stobif/mean_orbit.hpp"

#include <algorithm>
#include <cmath>

#include "stobif/errors.hpp"

namespace stobif {

double first_moment(const DensityField& field) {
    const double m = field.mass();
    if (!(m > kMassFloor))
        throw VanishedMassError("density mass " + std::to_string(m) +
                                " below usable threshold");
    return field.raw_first_moment() / m;
}

double MeanOrbit::mean_at(double t) const {
    if (times.empty())
        return x0;
    auto it = std::upper_bound(times.begin(), times.end(), t + 1e-12);
    if (it == times.begin())
        return means.front();
    const auto idx = static_cast<std::size_t>(std::distance(times.begin(), it)) - 1;
    return means[idx];
}

MeanOrbit mean_orbit(const SdeSystem& system, double r, const Grid& grid, double x0,
                     const OrbitConfig& cfg, SolverStats* stats) {
    MeanOrbit orbit;
    orbit.x0 = x0;
    orbit.r = r;
    orbit.conditioned = grid.policy == BoundaryPolicy::absorbing;

    EvolveConfig ecfg;
    ecfg.t_final = cfg.t_final;
    ecfg.dt = cfg.dt;
    ecfg.sample_stride = cfg.sample_stride;

    evolve_visit(
        system, r, grid, x0, ecfg,
        [&](const DensityField& field) {
            const double mass = field.mass();
            if (!(mass > kMassFloor)) {
                orbit.truncated = true;
                return false;
            }
            orbit.times.push_back(field.time);
            orbit.means.push_back(field.raw_first_moment() / mass);
            orbit.surviving_mass.push_back(mass);
            return true;
        },
        stats);

    return orbit;
}

} // namespace stobif
