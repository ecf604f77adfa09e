#include "stobif/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "stobif/errors.hpp"
#include "stobif/parallel.hpp"

namespace stobif {

std::string to_string(Stability s) {
    return s == Stability::stable ? "stable" : "unstable";
}

std::string to_string(OrbitFate fate) {
    switch (fate) {
    case OrbitFate::settled: return "settled";
    case OrbitFate::escaped_left: return "escaped-left";
    case OrbitFate::escaped_right: return "escaped-right";
    case OrbitFate::unsettled: return "unsettled";
    case OrbitFate::stationary_self: return "stationary-self";
    }
    return "?";
}

std::size_t EquilibriumScan::count(Stability s) const {
    return static_cast<std::size_t>(
        std::count_if(equilibria.begin(), equilibria.end(),
                      [s](const MeanEquilibrium& e) { return e.stability == s; }));
}

Grid default_grid_for(const SdeSystem& system, double r) {
    double half_width = 6.0;
    BoundaryPolicy policy = BoundaryPolicy::reflecting;
    if (system.name() == "saddle-node") {
        // Drift r + x^2 blows up in finite time; absorb escaping mass and
        // widen the box with |r| so the interesting region stays interior.
        half_width = std::max(6.0, 3.0 * (1.0 + std::sqrt(std::abs(r))));
        policy = BoundaryPolicy::absorbing;
    }
    const int n = std::max(16, static_cast<int>(std::lround(2.0 * half_width / 0.01)));
    return build_grid(-half_width, half_width, n, policy);
}

double effective_merge_tol(double merge_tol, double h) {
    return std::max(merge_tol, 2.0 * h);
}

namespace {

struct Classified {
    OrbitFate fate = OrbitFate::unsettled;
    double terminal = 0.0;
    double residual = 0.0;
    bool conditioned = false;
    bool truncated = false;
};

Classified classify(const MeanOrbit& orbit, const Grid& grid, const ScanConfig& cfg) {
    Classified c;
    c.conditioned = orbit.conditioned;
    c.truncated = orbit.truncated;
    const double center = grid.center();
    const double escape_at = cfg.escape_fraction * grid.half_width();
    const double T = orbit.final_time();
    const double m = orbit.final_mean();
    c.terminal = m;

    if (std::abs(m - center) > escape_at) {
        c.fate = m > center ? OrbitFate::escaped_right : OrbitFate::escaped_left;
        return c;
    }

    // The settle window T/10 needs at least one sample interval in it.
    const double sample_dt = cfg.dt * cfg.sample_stride;
    const bool window_usable = orbit.times.size() >= 3 && T >= 10.0 * sample_dt;
    if (window_usable) {
        c.residual = std::abs(orbit.mean_at(T) - orbit.mean_at(T - T / 10.0));
        if (c.residual < cfg.settle_tol) {
            c.fate = OrbitFate::settled;
            return c;
        }
    }
    if (orbit.truncated) {
        // Mass vanished while the mean was still moving: escaping physics.
        c.fate = m >= center ? OrbitFate::escaped_right : OrbitFate::escaped_left;
        return c;
    }
    c.fate = OrbitFate::unsettled;
    return c;
}

std::vector<double> default_fan(const Grid& grid, int fan_size) {
    const double lo = grid.center() - 0.8 * grid.half_width();
    const double hi = grid.center() + 0.8 * grid.half_width();
    std::vector<double> fan(static_cast<std::size_t>(fan_size));
    for (int k = 0; k < fan_size; ++k)
        fan[k] = lo + k * (hi - lo) / (fan_size - 1);
    return fan;
}

struct Cluster {
    double location = 0.0;
    std::vector<std::size_t> members; // indices into the outcome list
    bool attracting = false;
};

// Anchor label for basin bookkeeping: cluster index, or +-infinity escapes.
struct Anchor {
    enum class Kind { cluster, escape_left, escape_right } kind = Kind::cluster;
    int cluster = -1;
    bool operator==(const Anchor& o) const {
        return kind == o.kind && cluster == o.cluster;
    }
};

} // namespace

EquilibriumScan detect_equilibria(const SdeSystem& system, double r,
                                  const ScanConfig& cfg) {
    EquilibriumScan scan;
    scan.r = r;
    scan.grid = cfg.grid ? *cfg.grid : default_grid_for(system, r);
    scan.t_final = cfg.t_final;
    scan.dt = cfg.dt;
    scan.settle_tol = cfg.settle_tol;
    scan.merge_tol = effective_merge_tol(cfg.merge_tol, scan.grid.h);

    const Grid& grid = scan.grid;
    std::vector<double> fan = cfg.x0_fan.empty() ? default_fan(grid, cfg.fan_size)
                                                 : cfg.x0_fan;
    std::sort(fan.begin(), fan.end());
    const double x_lo = grid.x_min + 3.0 * grid.h;
    const double x_hi = grid.x_max - 3.0 * grid.h;
    const auto interior = std::count_if(fan.begin(), fan.end(), [&](double x) {
        return x > x_lo && x < x_hi;
    });
    if (interior < 5)
        throw ConfigError("x0 fan needs at least 5 points inside the grid interior");
    std::erase_if(fan, [&](double x) { return !(x > x_lo && x < x_hi); });
    scan.x0_fan = fan;

    OrbitConfig ocfg;
    ocfg.t_final = cfg.t_final;
    ocfg.dt = cfg.dt;
    ocfg.sample_stride = cfg.sample_stride;

    std::vector<SolverStats> fan_stats(fan.size());
    auto run_orbit = [&](double x0, SolverStats* stats) {
        try {
            return mean_orbit(system, r, grid, x0, ocfg, stats);
        } catch (const NumericalError& e) {
            std::ostringstream msg;
            msg << "r = " << r << ", x0 = " << x0 << ": " << e.what();
            throw NumericalError(msg.str());
        }
    };

    // Fan orbits are independent; results land in fan order.
    std::vector<Classified> cls(fan.size());
    parallel_for(static_cast<int>(fan.size()), cfg.workers, [&](int i) {
        const auto u = static_cast<std::size_t>(i);
        cls[u] = classify(run_orbit(fan[u], &fan_stats[u]), grid, cfg);
    });
    for (const SolverStats& s : fan_stats)
        scan.solver_stats.merge(s);

    scan.outcomes.resize(fan.size());
    for (std::size_t i = 0; i < fan.size(); ++i) {
        FanOutcome& out = scan.outcomes[i];
        out.x0 = fan[i];
        out.fate = cls[i].fate;
        out.terminal_mean = cls[i].terminal;
        out.residual = cls[i].residual;
        out.conditioned = cls[i].conditioned;
        out.truncated = cls[i].truncated;
    }

    // Cluster settled terminal values within merge_tol.
    std::vector<std::size_t> settled_idx;
    for (std::size_t i = 0; i < scan.outcomes.size(); ++i)
        if (scan.outcomes[i].fate == OrbitFate::settled)
            settled_idx.push_back(i);
    std::sort(settled_idx.begin(), settled_idx.end(), [&](std::size_t a, std::size_t b) {
        return scan.outcomes[a].terminal_mean < scan.outcomes[b].terminal_mean;
    });

    std::vector<Cluster> clusters;
    for (std::size_t pos = 0; pos < settled_idx.size(); ++pos) {
        const double v = scan.outcomes[settled_idx[pos]].terminal_mean;
        if (clusters.empty() ||
            v - scan.outcomes[clusters.back().members.back()].terminal_mean >
                scan.merge_tol)
            clusters.push_back({});
        clusters.back().members.push_back(settled_idx[pos]);
    }
    for (Cluster& c : clusters) {
        double sum = 0.0;
        for (std::size_t idx : c.members)
            sum += scan.outcomes[idx].terminal_mean;
        c.location = sum / static_cast<double>(c.members.size());
        // An attractor needs at least two supporting orbits, at least one of
        // which started away from it. A lone orbit that settled somewhere
        // (its own start, or a basin-straddling mixture mean) is no evidence.
        if (c.members.size() < 2)
            continue;
        for (std::size_t idx : c.members)
            if (std::abs(scan.outcomes[idx].x0 - c.location) > scan.merge_tol)
                c.attracting = true;
    }

    // Stable equilibria from attracting clusters; mark the rest.
    std::vector<MeanEquilibrium> stable_eqs;
    std::vector<int> cluster_id(clusters.size(), -1);
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        const Cluster& c = clusters[ci];
        if (!c.attracting) {
            for (std::size_t idx : c.members) {
                // Settled exactly where it started: a self-stationary point.
                // Settled elsewhere without cluster support (a mixture mean
                // from an orbit straddling a basin boundary): keep it as a
                // plain settled outcome, anchored to nothing.
                if (std::abs(scan.outcomes[idx].terminal_mean -
                             scan.outcomes[idx].x0) <= scan.merge_tol)
                    scan.outcomes[idx].fate = OrbitFate::stationary_self;
                scan.outcomes[idx].cluster = -1;
            }
            continue;
        }
        cluster_id[ci] = static_cast<int>(stable_eqs.size());
        MeanEquilibrium eq;
        eq.location = c.location;
        eq.stability = Stability::stable;
        bool from_left = false, from_right = false, truncated = false;
        for (std::size_t idx : c.members) {
            const FanOutcome& out = scan.outcomes[idx];
            scan.outcomes[idx].cluster = cluster_id[ci];
            eq.basin_sample.push_back(out.x0);
            eq.residual = std::max(eq.residual, out.residual);
            eq.conditioned = eq.conditioned || out.conditioned;
            truncated = truncated || out.truncated;
            if (out.x0 < c.location - scan.merge_tol)
                from_left = true;
            if (out.x0 > c.location + scan.merge_tol)
                from_right = true;
        }
        if (!(from_left && from_right))
            eq.note = "one-sided";
        if (truncated)
            eq.note += eq.note.empty() ? "truncation-dependent"
                                       : "; truncation-dependent";
        stable_eqs.push_back(std::move(eq));
    }

    // An orbit whose mass ran out after it had already reached a stable
    // cluster (terminal mean on the cluster, settle window unusable) belongs
    // to that cluster's basin, not to an escape route.
    auto nearest_cluster = [&](double terminal) {
        for (std::size_t ci = 0; ci < stable_eqs.size(); ++ci)
            if (std::abs(stable_eqs[ci].location - terminal) <= scan.merge_tol)
                return static_cast<int>(ci);
        return -1;
    };

    // Basin boundaries: consecutive anchored fan points that reach different
    // attractors bracket an unstable equilibrium; bisect on x0 to merge_tol.
    std::vector<std::pair<std::size_t, Anchor>> anchored;
    for (std::size_t i = 0; i < scan.outcomes.size(); ++i) {
        const FanOutcome& out = scan.outcomes[i];
        const bool escaped = out.fate == OrbitFate::escaped_left ||
                             out.fate == OrbitFate::escaped_right;
        if (escaped && out.truncated) {
            const int ci = nearest_cluster(out.terminal_mean);
            if (ci >= 0) {
                anchored.push_back({i, {Anchor::Kind::cluster, ci}});
                continue;
            }
        }
        if (out.fate == OrbitFate::escaped_left)
            anchored.push_back({i, {Anchor::Kind::escape_left, -1}});
        else if (out.fate == OrbitFate::escaped_right)
            anchored.push_back({i, {Anchor::Kind::escape_right, -1}});
        else if (out.fate == OrbitFate::settled && out.cluster >= 0)
            anchored.push_back({i, {Anchor::Kind::cluster, out.cluster}});
    }

    auto anchor_target = [&](const Anchor& a) {
        if (a.kind == Anchor::Kind::escape_left)
            return grid.x_min;
        if (a.kind == Anchor::Kind::escape_right)
            return grid.x_max;
        return stable_eqs[static_cast<std::size_t>(a.cluster)].location;
    };

    std::vector<MeanEquilibrium> unstable_eqs;
    for (std::size_t k = 0; k + 1 < anchored.size(); ++k) {
        const auto& [ia, anchor_a] = anchored[k];
        const auto& [ib, anchor_b] = anchored[k + 1];
        if (anchor_a == anchor_b)
            continue;
        double xa = scan.outcomes[ia].x0;
        double xb = scan.outcomes[ib].x0;
        const double theta = 0.5 * (anchor_target(anchor_a) + anchor_target(anchor_b));
        int budget = cfg.max_bisection_orbits;
        bool conditioned = scan.outcomes[ia].conditioned || scan.outcomes[ib].conditioned;
        while (xb - xa > scan.merge_tol && budget-- > 0) {
            const double xm = 0.5 * (xa + xb);
            SolverStats bstats;
            const Classified cm = classify(run_orbit(xm, &bstats), grid, cfg);
            scan.solver_stats.merge(bstats);
            conditioned = conditioned || cm.conditioned;
            // The terminal mean tells which attractor the orbit headed for,
            // settled or not.
            if (cm.terminal <= theta)
                xa = xm;
            else
                xb = xm;
        }
        MeanEquilibrium eq;
        eq.location = 0.5 * (xa + xb);
        eq.stability = Stability::unstable;
        eq.basin_sample = {scan.outcomes[ia].x0, scan.outcomes[ib].x0};
        eq.conditioned = conditioned;
        for (std::size_t idx : {ia, ib})
            if (scan.outcomes[idx].fate == OrbitFate::settled)
                eq.residual = std::max(eq.residual, scan.outcomes[idx].residual);
        if (xb - xa > scan.merge_tol)
            eq.note = "bisection budget exhausted";
        unstable_eqs.push_back(std::move(eq));
    }

    // Assemble, keeping locations separated by at least merge_tol. Unstable
    // points that collapsed onto a stable cluster are dropped.
    scan.equilibria = stable_eqs;
    for (const MeanEquilibrium& u : unstable_eqs) {
        const bool clashes =
            std::any_of(scan.equilibria.begin(), scan.equilibria.end(),
                        [&](const MeanEquilibrium& e) {
                            return std::abs(e.location - u.location) < scan.merge_tol;
                        });
        if (!clashes)
            scan.equilibria.push_back(u);
    }
    std::sort(scan.equilibria.begin(), scan.equilibria.end(),
              [](const MeanEquilibrium& a, const MeanEquilibrium& b) {
                  return a.location < b.location;
              });

    if (scan.equilibria.empty()) {
        std::size_t n_settled = 0, n_self = 0, n_escaped = 0, n_unsettled = 0;
        for (const FanOutcome& out : scan.outcomes) {
            switch (out.fate) {
            case OrbitFate::settled: ++n_settled; break;
            case OrbitFate::stationary_self: ++n_self; break;
            case OrbitFate::unsettled: ++n_unsettled; break;
            default: ++n_escaped; break;
            }
        }
        std::ostringstream diag;
        if (n_self >= 2)
            diag << "degenerate: continuum of equilibria (" << n_self
                 << " orbits settled where they started)";
        else if (n_settled + n_self == 0)
            diag << "no settled orbits (" << n_escaped << " escaped, " << n_unsettled
                 << " unsettled)";
        else
            diag << "no attracting equilibria";
        scan.diagnostic = diag.str();
    }

    return scan;
}

} // namespace stobif
