#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stobif/grid.hpp"
#include "stobif/mean_orbit.hpp"
#include "stobif/system.hpp"

namespace stobif {

enum class Stability { stable, unstable };

std::string to_string(Stability s);

/// How a fan orbit ended up, for provenance and basin bookkeeping.
enum class OrbitFate {
    settled,        // residual below settle_tol; terminal value usable
    escaped_left,   // mean left the domain core or mass vanished, leftward
    escaped_right,
    unsettled,      // still moving at t_final, not escaping
    stationary_self // settled exactly where it started, attracting nothing
};

std::string to_string(OrbitFate fate);

struct FanOutcome {
    double x0 = 0.0;
    OrbitFate fate = OrbitFate::unsettled;
    double terminal_mean = 0.0;
    double residual = 0.0;
    bool conditioned = false;
    bool truncated = false;
    int cluster = -1; // index into the stable-cluster list, -1 if none
};

struct MeanEquilibrium {
    double location = 0.0;
    Stability stability = Stability::stable;
    std::vector<double> basin_sample; // x0 values supporting the classification
    double residual = 0.0;            // max settle residual over supporters
    bool conditioned = false;         // supported by absorbing-boundary orbits
    std::string note;                 // "one-sided", "truncation-dependent", ...
};

struct ScanConfig {
    double t_final = 40.0;
    double dt = 1e-3;
    int sample_stride = 100;
    double settle_tol = 1e-4; // absolute, state units, over a T/10 window
    double merge_tol = 0.02;  // cluster separation; effective value >= 2h
    int fan_size = 21;        // equispaced over the central 80% of the domain
    std::vector<double> x0_fan;         // overrides fan_size when nonempty
    double escape_fraction = 0.9;       // of the domain half-width
    int max_bisection_orbits = 64;      // per basin boundary
    int workers = 1;                    // threads for fan orbits
    std::optional<Grid> grid;           // default: default_grid_for(system, r)
};

struct EquilibriumScan {
    double r = 0.0;
    std::vector<MeanEquilibrium> equilibria; // sorted by location
    std::vector<double> x0_fan;
    std::vector<FanOutcome> outcomes; // one per fan point, fan order
    Grid grid;
    double t_final = 0.0;
    double dt = 0.0;
    double settle_tol = 0.0;
    double merge_tol = 0.0; // effective value used
    std::string diagnostic; // empty when equilibria were found normally
    SolverStats solver_stats; // merged over all orbits of the scan

    std::size_t count(Stability s) const;
};

/// Domain and boundary defaults per system. Saddle-node gets absorbing
/// boundaries and a parameter-dependent half width because its drift pushes
/// mass to infinity in finite time; the others use reflecting walls on
/// (-6, 6).
Grid default_grid_for(const SdeSystem& system, double r);

/// Effective cluster separation: merge_tol, widened to 2h on coarse grids.
double effective_merge_tol(double merge_tol, double h);

/// Runs a fan of mean orbits, clusters settled terminal values into stable
/// equilibria, and locates unstable equilibria as basin boundaries by
/// bisection on the initial condition. Never throws on empty results; the
/// diagnostic field explains them.
EquilibriumScan detect_equilibria(const SdeSystem& system, double r,
                                  const ScanConfig& cfg);

} // namespace stobif
