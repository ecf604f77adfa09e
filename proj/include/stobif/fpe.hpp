#pragma once

#include <functional>
#include <vector>

#include "stobif/density.hpp"
#include "stobif/grid.hpp"
#include "stobif/system.hpp"

namespace stobif {

/// Tridiagonal spatial operator L of p_t = L p, stored as bands.
/// sub[0] and sup[n-1] are unused padding.
struct FpeOperator {
    Grid grid;
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;

    /// Dense row application, y = L p (mainly for tests).
    std::vector<double> apply(const std::vector<double>& p) const;
};

/// Per-solve diagnostics accumulated across steps.
struct SolverStats {
    double worst_negative_fraction = 0.0; // max pre-clip |negative| / max(p)
    double boundary_density_max = 0.0;    // max density seen in the two edge cells
    long steps = 0;

    void merge(const SolverStats& other) {
        worst_negative_fraction =
            worst_negative_fraction > other.worst_negative_fraction
                ? worst_negative_fraction
                : other.worst_negative_fraction;
        boundary_density_max = boundary_density_max > other.boundary_density_max
                                   ? boundary_density_max
                                   : other.boundary_density_max;
        steps += other.steps;
    }
};

/// Assembles the finite-volume discretization of
///   p_t = -(f(r,x) p)_x + 1/2 (sigma^2(x) p)_xx
/// with upwinded advective flux and centered diffusive flux:
///   F_{i+1/2} = f(x_{i+1/2}) p_upwind - theta [ (d p)_{i+1} - (d p)_i ] / h,
/// d = sigma^2/2 at cell centers. theta = sigma^2(x_{i+1/2}) / mean(sigma^2)
/// is 1 + O(h^2) for smooth nonzero noise and 0 at interfaces where sigma
/// vanishes, so no spurious mass crosses the degenerate point of
/// multiplicative noise. Reflecting rows zero the boundary flux; absorbing
/// rows use a zero ghost density.
FpeOperator assemble_operator(const SdeSystem& system, double r, const Grid& grid);

/// Gaussian approximation of delta(x - x0) with std dev 2h, normalized to
/// unit mass. Requires x0 in (x_min + 3h, x_max - 3h).
DensityField delta_init(const Grid& grid, double x0);

/// Repeated implicit Euler steps with one factorization of (I - dt L).
class ImplicitStepper {
public:
    ImplicitStepper(const FpeOperator& op, double dt);

    /// Advances the field by dt in place. Negative round-off entries are
    /// clipped to zero; under reflecting boundaries mass is renormalized to
    /// its pre-step value. Clip magnitudes are tracked in stats().
    void advance(DensityField& field);

    const SolverStats& stats() const { return stats_; }

private:
    double dt_;
    BoundaryPolicy policy_;
    double h_;
    std::vector<double> inv_pivot_; // Thomas factorization of I - dt L
    std::vector<double> upper_;
    std::vector<double> lower_;
    std::vector<double> work_;
    SolverStats stats_;
};

/// Single implicit Euler step (I - dt L) p_new = p_old.
DensityField step(const FpeOperator& op, const DensityField& field, double dt,
                  SolverStats* stats = nullptr);

struct EvolveConfig {
    double t_final = 0.0;
    double dt = 1e-3;
    int sample_stride = 100; // snapshot every this many steps
};

/// Streams density snapshots (including t = 0 and the final step) to visit.
/// Returning false from visit stops the evolution early.
void evolve_visit(const SdeSystem& system, double r, const Grid& grid, double x0,
                  const EvolveConfig& cfg,
                  const std::function<bool(const DensityField&)>& visit,
                  SolverStats* stats = nullptr);

/// Snapshot-collecting wrapper around evolve_visit.
std::vector<DensityField> evolve(const SdeSystem& system, double r, const Grid& grid,
                                 double x0, const EvolveConfig& cfg,
                                 SolverStats* stats = nullptr);

} // namespace stobif
