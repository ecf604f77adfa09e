#pragma once

#include <vector>

#include "stobif/density.hpp"
#include "stobif/fpe.hpp"
#include "stobif/grid.hpp"
#include "stobif/system.hpp"

namespace stobif {

/// Mass below this is treated as vanished; orbits truncate there.
inline constexpr double kMassFloor = 1e-6;

/// First moment of the density divided by its mass (conditioned mean under
/// absorption; the plain mean when mass is 1). Throws VanishedMassError when
/// mass <= kMassFloor.
double first_moment(const DensityField& field);

/// Time series of the mean state for one initial condition.
struct MeanOrbit {
    double x0 = 0.0;
    double r = 0.0;
    std::vector<double> times;
    std::vector<double> means;
    std::vector<double> surviving_mass;
    bool conditioned = false; // absorbing boundaries: means are over survivors
    bool truncated = false;   // mass vanished before t_final

    double final_time() const { return times.empty() ? 0.0 : times.back(); }
    double final_mean() const { return means.empty() ? x0 : means.back(); }

    /// Mean at the latest sample with time <= t (times are sorted).
    double mean_at(double t) const;
};

struct OrbitConfig {
    double t_final = 40.0;
    double dt = 1e-3;
    int sample_stride = 100;
};

/// Evolves the density from delta(x - x0) and records the mean per sample.
/// A vanished-mass condition truncates the orbit instead of failing.
MeanOrbit mean_orbit(const SdeSystem& system, double r, const Grid& grid, double x0,
                     const OrbitConfig& cfg, SolverStats* stats = nullptr);

} // namespace stobif
