#pragma once

#include <string>
#include <vector>

#include "stobif/equilibria.hpp"
#include "stobif/system.hpp"

namespace stobif {

enum class Mode { deterministic, stochastic };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

/// Equilibrium signature of one scan: stability labels sorted, e.g.
/// "stable|stable|unstable"; "none" for an empty scan.
std::string signature(const EquilibriumScan& scan);

struct BifurcationInterval {
    double r_lo = 0.0;
    double r_hi = 0.0;
    std::string signature_before;
    std::string signature_after;
};

struct SweepConfig {
    double r_min = 0.0;
    double r_max = 0.0;
    int r_steps = 2; // number of r samples, uniformly spaced
    ScanConfig scan;
    bool refine = false;       // bisect flagged intervals in r
    double refine_width = 0.01;
    int workers = 0;           // 0: hardware concurrency
};

struct BifurcationDiagram {
    std::string system_name;
    Mode mode = Mode::stochastic;
    std::vector<double> r_values;
    std::vector<EquilibriumScan> scans; // aligned with r_values
    std::vector<BifurcationInterval> bifurcations;
};

/// Scans a uniform r grid and flags every adjacent pair whose equilibrium
/// signature (count + stability multiset) changes. Scans run concurrently;
/// per-r diagnostics are kept, never escalated to errors. In deterministic
/// mode the diffusion is replaced by zero.
BifurcationDiagram sweep(const SdeSystem& system, Mode mode, const SweepConfig& cfg);

} // namespace stobif
