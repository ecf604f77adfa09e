#include "stobif/montecarlo.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "stobif/errors.hpp"
#include "stobif/parallel.hpp"

namespace stobif {

namespace {

struct BlockMoments {
    std::vector<long> alive;  // per sample
    std::vector<double> sum;
    std::vector<double> sumsq;
};

} // namespace

EnsembleOrbit em_mean_orbit(const SdeSystem& system, double r, double x0,
                            const EnsembleConfig& cfg) {
    if (cfg.n_paths < 100)
        throw ConfigError("n_paths must be >= 100, got " +
                          std::to_string(cfg.n_paths));
    if (!(cfg.dt > 0.0))
        throw ConfigError("dt must be positive");
    if (!(cfg.t_final > 0.0))
        throw ConfigError("t_final must be positive");
    if (!(cfg.domain_clip > 0.0))
        throw ConfigError("domain_clip must be positive");
    if (cfg.sample_stride < 1 || cfg.block_size < 1)
        throw ConfigError("sample_stride and block_size must be >= 1");

    const long n_steps = std::max(1L, std::lround(cfg.t_final / cfg.dt));
    std::vector<long> sample_steps{0};
    for (long k = cfg.sample_stride; k < n_steps; k += cfg.sample_stride)
        sample_steps.push_back(k);
    sample_steps.push_back(n_steps);
    const std::size_t n_samples = sample_steps.size();

    const int n_blocks = (cfg.n_paths + cfg.block_size - 1) / cfg.block_size;
    std::vector<BlockMoments> blocks(static_cast<std::size_t>(n_blocks));

    const double sqrt_dt = std::sqrt(cfg.dt);
    const double clip = cfg.domain_clip;

    // Each block draws from its own (seed, block) stream, so the ensemble is
    // reproducible bit-for-bit regardless of how many workers run it.
    parallel_for(n_blocks, cfg.workers, [&](int b) {
        const int lo = b * cfg.block_size;
        const int hi = std::min(cfg.n_paths, lo + cfg.block_size);
        const int count = hi - lo;

        std::seed_seq seq{static_cast<unsigned>(cfg.seed & 0xffffffffu),
                          static_cast<unsigned>(cfg.seed >> 32),
                          static_cast<unsigned>(b)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);

        std::vector<double> x(static_cast<std::size_t>(count), x0);
        std::vector<char> dead(static_cast<std::size_t>(count), 0);

        BlockMoments& m = blocks[static_cast<std::size_t>(b)];
        m.alive.assign(n_samples, 0);
        m.sum.assign(n_samples, 0.0);
        m.sumsq.assign(n_samples, 0.0);

        std::size_t next_sample = 0;
        auto record = [&](std::size_t s) {
            for (int p = 0; p < count; ++p) {
                if (dead[p])
                    continue;
                m.alive[s] += 1;
                m.sum[s] += x[p];
                m.sumsq[s] += x[p] * x[p];
            }
        };
        record(next_sample++);

        for (long k = 1; k <= n_steps; ++k) {
            for (int p = 0; p < count; ++p) {
                if (dead[p])
                    continue;
                const double xp = x[p];
                const double z = normal(rng);
                const double xn =
                    xp + system.drift(r, xp) * cfg.dt + system.diffusion(xp) * sqrt_dt * z;
                if (!(xn > -clip && xn < clip)) {
                    dead[p] = 1; // frozen outside the domain, excluded from means
                    continue;
                }
                x[p] = xn;
            }
            if (next_sample < n_samples && k == sample_steps[next_sample])
                record(next_sample++);
        }
    });

    EnsembleOrbit result;
    MeanOrbit& orbit = result.orbit;
    orbit.x0 = x0;
    orbit.r = r;

    for (std::size_t s = 0; s < n_samples; ++s) {
        long alive = 0;
        double sum = 0.0, sumsq = 0.0;
        for (const BlockMoments& m : blocks) { // fixed block order
            alive += m.alive[s];
            sum += m.sum[s];
            sumsq += m.sumsq[s];
        }
        if (alive == 0) {
            orbit.truncated = true;
            break;
        }
        const double mean = sum / static_cast<double>(alive);
        double se = 0.0;
        if (alive > 1) {
            const double var =
                std::max(0.0, (sumsq - static_cast<double>(alive) * mean * mean) /
                                  static_cast<double>(alive - 1));
            se = std::sqrt(var / static_cast<double>(alive));
        }
        orbit.times.push_back(static_cast<double>(sample_steps[s]) * cfg.dt);
        orbit.means.push_back(mean);
        orbit.surviving_mass.push_back(static_cast<double>(alive) /
                                       static_cast<double>(cfg.n_paths));
        result.std_error.push_back(se);
    }

    orbit.conditioned =
        !orbit.surviving_mass.empty() && orbit.surviving_mass.back() < 1.0;
    return result;
}

} // namespace stobif
