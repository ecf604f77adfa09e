#pragma once

#include <cstdint>
#include <vector>

#include "stobif/mean_orbit.hpp"
#include "stobif/system.hpp"

namespace stobif {

struct EnsembleConfig {
    int n_paths = 100000;
    double dt = 1e-3;
    double t_final = 1.0;
    std::uint64_t seed = 0;
    double domain_clip = 6.0; // paths leaving (-clip, clip) freeze, flagged dead
    int sample_stride = 100;
    int workers = 0;          // 0: hardware concurrency
    int block_size = 8192;    // paths per independently seeded block
};

/// Euler-Maruyama ensemble mean with per-sample standard errors.
struct EnsembleOrbit {
    MeanOrbit orbit;                 // means over surviving paths
    std::vector<double> std_error;   // standard error of the ensemble mean
};

/// Simulates n_paths of X_{k+1} = X_k + f(r,X_k) dt + sigma(X_k) sqrt(dt) Z_k
/// under the Ito convention. Paths are partitioned into fixed blocks seeded
/// from (seed, block index), so output is byte-identical for any worker
/// count. Clipped paths are excluded from the mean from the moment they
/// leave the domain; all-paths-clipped truncates the orbit.
EnsembleOrbit em_mean_orbit(const SdeSystem& system, double r, double x0,
                            const EnsembleConfig& cfg);

} // namespace stobif
