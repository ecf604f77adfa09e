#include "stobif/bifurcation.hpp"

#include <algorithm>
#include <sstream>

#include "stobif/errors.hpp"
#include "stobif/parallel.hpp"

namespace stobif {

std::string to_string(Mode mode) {
    return mode == Mode::deterministic ? "deterministic" : "stochastic";
}

Mode mode_from_string(const std::string& s) {
    if (s == "deterministic")
        return Mode::deterministic;
    if (s == "stochastic")
        return Mode::stochastic;
    throw ConfigError("unknown mode \"" + s + "\"; valid: deterministic stochastic");
}

std::string signature(const EquilibriumScan& scan) {
    if (scan.equilibria.empty())
        return "none";
    std::vector<std::string> labels;
    labels.reserve(scan.equilibria.size());
    for (const MeanEquilibrium& eq : scan.equilibria)
        labels.push_back(to_string(eq.stability));
    std::sort(labels.begin(), labels.end());
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i)
            out += '|';
        out += labels[i];
    }
    return out;
}

namespace {

EquilibriumScan scan_at(const SdeSystem& system, double r, const ScanConfig& base) {
    ScanConfig cfg = base;
    if (!cfg.grid)
        cfg.grid = default_grid_for(system, r);
    return detect_equilibria(system, r, cfg);
}

} // namespace

BifurcationDiagram sweep(const SdeSystem& system, Mode mode, const SweepConfig& cfg) {
    if (!(cfg.r_min < cfg.r_max))
        throw ConfigError("sweep needs r_min < r_max");
    if (cfg.r_steps < 2)
        throw ConfigError("sweep needs r_steps >= 2, got " +
                          std::to_string(cfg.r_steps));

    const SdeSystem sys =
        mode == Mode::deterministic ? system.with_zero_diffusion() : system;

    BifurcationDiagram diagram;
    diagram.system_name = system.name();
    diagram.mode = mode;
    diagram.r_values.resize(static_cast<std::size_t>(cfg.r_steps));
    for (int k = 0; k < cfg.r_steps; ++k)
        diagram.r_values[k] =
            cfg.r_min + k * (cfg.r_max - cfg.r_min) / (cfg.r_steps - 1);

    diagram.scans.resize(diagram.r_values.size());
    parallel_for(cfg.r_steps, cfg.workers, [&](int k) {
        diagram.scans[static_cast<std::size_t>(k)] =
            scan_at(sys, diagram.r_values[static_cast<std::size_t>(k)], cfg.scan);
    });

    for (std::size_t k = 0; k + 1 < diagram.scans.size(); ++k) {
        std::string before = signature(diagram.scans[k]);
        std::string after = signature(diagram.scans[k + 1]);
        if (before == after)
            continue;
        double r_lo = diagram.r_values[k];
        double r_hi = diagram.r_values[k + 1];
        if (cfg.refine) {
            // Narrow the interval by re-scanning midpoints until the
            // signature change is localized to refine_width.
            while (r_hi - r_lo > cfg.refine_width) {
                const double rm = 0.5 * (r_lo + r_hi);
                const std::string mid = signature(scan_at(sys, rm, cfg.scan));
                if (mid == before)
                    r_lo = rm;
                else {
                    r_hi = rm;
                    after = mid;
                }
            }
        }
        diagram.bifurcations.push_back({r_lo, r_hi, before, after});
    }

    return diagram;
}

} // namespace stobif
