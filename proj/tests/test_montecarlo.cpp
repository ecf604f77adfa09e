#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stobif/errors.hpp"
#include "stobif/montecarlo.hpp"
#include "stobif/system.hpp"

using namespace stobif;

TEST_CASE("noise-free ensemble collapses to the ODE solution") {
    const SdeSystem det = lookup_builtin("pitchfork").with_zero_diffusion();
    EnsembleConfig cfg;
    cfg.n_paths = 128;
    cfg.dt = 1e-4;
    cfg.t_final = 1.0;
    cfg.sample_stride = 10000;
    cfg.workers = 2;
    const EnsembleOrbit ens = em_mean_orbit(det, 1.0, 0.5, cfg);
    auto f = [](double x) { return x - x * x * x; };
    const double expected = oracles::rk4(f, 0.5, 1.0, 1e-5);
    CHECK(std::abs(ens.orbit.final_mean() - expected) / expected < 1e-3);
    CHECK(ens.std_error.back() <= 1e-8); // identical paths up to round-off
}

TEST_CASE("GBM ensemble mean within 3 standard errors") {
    const SdeSystem gbm =
        parse_polynomial_system({{1, 0.0, 1.0}}, {{1, 0.3, 0.0}}, "gbm");
    EnsembleConfig cfg;
    cfg.n_paths = 100000;
    cfg.dt = 1e-3;
    cfg.t_final = 1.0;
    cfg.seed = 1234;
    cfg.domain_clip = 50.0;
    cfg.sample_stride = 250;
    cfg.workers = 2;
    const EnsembleOrbit ens = em_mean_orbit(gbm, 0.5, 1.0, cfg);
    const double expected = oracles::gbm_mean(1.0, 0.5, 1.0);
    const double se = ens.std_error.back();
    REQUIRE(se > 0.0);
    CHECK(std::abs(ens.orbit.final_mean() - expected) <= 3.0 * se);
    CHECK(ens.orbit.surviving_mass.back() == 1.0);
}

TEST_CASE("fixed seed reproduces the orbit bit for bit, any worker count") {
    const SdeSystem sys = lookup_builtin("pitchfork");
    auto run = [&](int workers) {
        EnsembleConfig cfg;
        cfg.n_paths = 4000;
        cfg.dt = 1e-3;
        cfg.t_final = 0.5;
        cfg.seed = 42;
        cfg.sample_stride = 100;
        cfg.workers = workers;
        cfg.block_size = 512;
        return em_mean_orbit(sys, 1.0, 1.0, cfg);
    };
    const EnsembleOrbit a = run(1);
    const EnsembleOrbit b = run(2);
    const EnsembleOrbit c = run(2);
    REQUIRE(a.orbit.means.size() == b.orbit.means.size());
    for (std::size_t i = 0; i < a.orbit.means.size(); ++i) {
        CHECK(a.orbit.means[i] == b.orbit.means[i]);
        CHECK(b.orbit.means[i] == c.orbit.means[i]);
        CHECK(a.std_error[i] == b.std_error[i]);
    }

    // A different seed gives a different draw.
    EnsembleConfig other;
    other.n_paths = 4000;
    other.dt = 1e-3;
    other.t_final = 0.5;
    other.seed = 43;
    other.sample_stride = 100;
    other.block_size = 512;
    const EnsembleOrbit d = em_mean_orbit(sys, 1.0, 1.0, other);
    CHECK(d.orbit.final_mean() != a.orbit.final_mean());
}

TEST_CASE("clipped paths leave the surviving fraction and can truncate") {
    // Saddle-node blow-up: r + x^2 drives every path out of the window.
    const SdeSystem sys = lookup_builtin("saddle-node");
    EnsembleConfig cfg;
    cfg.n_paths = 500;
    cfg.dt = 1e-3;
    cfg.t_final = 20.0;
    cfg.seed = 7;
    cfg.domain_clip = 6.0;
    cfg.sample_stride = 100;
    cfg.workers = 2;
    const EnsembleOrbit ens = em_mean_orbit(sys, 1.0, 0.5, cfg);
    CHECK(ens.orbit.truncated);
    CHECK(ens.orbit.conditioned);
    REQUIRE(!ens.orbit.surviving_mass.empty());
    CHECK(ens.orbit.surviving_mass.back() < 1.0);
    for (std::size_t k = 1; k < ens.orbit.surviving_mass.size(); ++k)
        CHECK(ens.orbit.surviving_mass[k] <= ens.orbit.surviving_mass[k - 1]);
}

TEST_CASE("ensemble config validation") {
    const SdeSystem sys = lookup_builtin("pitchfork");
    EnsembleConfig cfg;
    cfg.n_paths = 50; // too few
    cfg.t_final = 1.0;
    CHECK_THROWS_AS(em_mean_orbit(sys, 1.0, 1.0, cfg), ConfigError);
    cfg.n_paths = 1000;
    cfg.dt = -1.0;
    CHECK_THROWS_AS(em_mean_orbit(sys, 1.0, 1.0, cfg), ConfigError);
}
