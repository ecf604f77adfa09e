#include <doctest.h>

#include <cmath>

#include "stobif/bifurcation.hpp"
#include "stobif/errors.hpp"
#include "stobif/system.hpp"

using namespace stobif;

namespace {

SweepConfig fast_sweep(double r_min, double r_max, int steps) {
    SweepConfig cfg;
    cfg.r_min = r_min;
    cfg.r_max = r_max;
    cfg.r_steps = steps;
    cfg.workers = 2;
    cfg.scan.t_final = 30.0; // settles relaxation rates down to ~0.5
    cfg.scan.dt = 2e-3;
    cfg.scan.grid = build_grid(-6.0, 6.0, 600, BoundaryPolicy::reflecting);
    return cfg;
}

} // namespace

TEST_CASE("sweep validates its range") {
    const SdeSystem sys = lookup_builtin("pitchfork");
    SweepConfig cfg = fast_sweep(0.0, 1.0, 1);
    CHECK_THROWS_AS(sweep(sys, Mode::deterministic, cfg), ConfigError);
    cfg.r_steps = 5;
    cfg.r_min = 2.0;
    CHECK_THROWS_AS(sweep(sys, Mode::deterministic, cfg), ConfigError);
}

TEST_CASE("deterministic saddle-node sweep: pair of equilibria below r=0, none above") {
    const SdeSystem sys = lookup_builtin("saddle-node");
    // Samples at -1, -1/3, +1/3, +1 keep clear of the degenerate r = 0.
    const BifurcationDiagram d = sweep(sys, Mode::deterministic, fast_sweep(-1, 1, 4));

    REQUIRE(d.r_values.size() == 4);
    for (std::size_t k = 0; k < d.r_values.size(); ++k) {
        const double r = d.r_values[k];
        const EquilibriumScan& scan = d.scans[k];
        if (r < 0.0) {
            REQUIRE(scan.equilibria.size() == 2);
            const double root = std::sqrt(-r);
            CHECK(scan.equilibria[0].location == doctest::Approx(-root).epsilon(0.1));
            CHECK(scan.equilibria[0].stability == Stability::stable);
            CHECK(scan.equilibria[1].location == doctest::Approx(root).epsilon(0.1));
            CHECK(scan.equilibria[1].stability == Stability::unstable);
        } else {
            CHECK(scan.equilibria.empty());
        }
    }
    REQUIRE(d.bifurcations.size() == 1);
    CHECK(d.bifurcations[0].r_lo <= 0.0);
    CHECK(d.bifurcations[0].r_hi >= 0.0);
    CHECK(d.bifurcations[0].signature_after == "none");
}

TEST_CASE("deterministic pitchfork sweep: change flagged around r=0") {
    const SdeSystem sys = lookup_builtin("pitchfork");
    const BifurcationDiagram d = sweep(sys, Mode::deterministic, fast_sweep(-1, 1, 2));

    REQUIRE(d.r_values.size() == 2);
    const EquilibriumScan& below = d.scans[0];
    REQUIRE(below.equilibria.size() == 1);
    CHECK(std::abs(below.equilibria[0].location) <= below.merge_tol);
    CHECK(below.equilibria[0].stability == Stability::stable);

    const EquilibriumScan& above = d.scans[1];
    REQUIRE(above.equilibria.size() == 3);
    CHECK(above.count(Stability::stable) == 2);
    CHECK(above.count(Stability::unstable) == 1);

    REQUIRE(d.bifurcations.size() == 1);
    CHECK(d.bifurcations[0].r_lo <= 0.0);
    CHECK(d.bifurcations[0].r_hi >= 0.0);
}

TEST_CASE("refining r_steps keeps every flagged interval") {
    const SdeSystem sys = lookup_builtin("saddle-node");
    const BifurcationDiagram coarse =
        sweep(sys, Mode::deterministic, fast_sweep(-1, 1, 4));
    const BifurcationDiagram fine =
        sweep(sys, Mode::deterministic, fast_sweep(-1, 1, 7));

    for (const BifurcationInterval& b : coarse.bifurcations) {
        bool contained = false;
        for (const BifurcationInterval& f : fine.bifurcations)
            contained = contained || (f.r_lo >= b.r_lo - 1e-12 &&
                                      f.r_hi <= b.r_hi + 1e-12);
        CHECK(contained);
    }
}

TEST_CASE("interval refinement narrows to the requested width") {
    const SdeSystem sys = lookup_builtin("saddle-node");
    SweepConfig cfg = fast_sweep(-1, 1, 4);
    cfg.refine = true;
    cfg.refine_width = 0.1;
    const BifurcationDiagram d = sweep(sys, Mode::deterministic, cfg);
    REQUIRE(d.bifurcations.size() == 1);
    CHECK(d.bifurcations[0].r_hi - d.bifurcations[0].r_lo <= 0.1);
    // The refined interval hugs the true bifurcation value r = 0.
    CHECK(d.bifurcations[0].r_lo <= 0.0);
    CHECK(d.bifurcations[0].r_hi >= -1e-9);
}

TEST_CASE("signature strings") {
    EquilibriumScan scan;
    CHECK(signature(scan) == "none");
    scan.equilibria.push_back({0.5, Stability::unstable, {}, 0.0, false, ""});
    scan.equilibria.push_back({-0.5, Stability::stable, {}, 0.0, false, ""});
    CHECK(signature(scan) == "stable|unstable");
}
