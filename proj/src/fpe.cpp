#include "stobif/fpe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stobif/errors.hpp"

namespace stobif {

std::vector<double> FpeOperator::apply(const std::vector<double>& p) const {
    const int n = grid.n;
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double v = diag[i] * p[i];
        if (i > 0)
            v += sub[i] * p[i - 1];
        if (i + 1 < n)
            v += sup[i] * p[i + 1];
        y[i] = v;
    }
    return y;
}

FpeOperator assemble_operator(const SdeSystem& system, double r, const Grid& grid) {
    const int n = grid.n;
    const double h = grid.h;
    FpeOperator op;
    op.grid = grid;
    op.sub.assign(static_cast<std::size_t>(n), 0.0);
    op.diag.assign(static_cast<std::size_t>(n), 0.0);
    op.sup.assign(static_cast<std::size_t>(n), 0.0);

    // d_i = sigma^2/2 at cell centers.
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double s = system.diffusion(grid.node(i));
        if (std::isnan(s))
            throw NumericalError("diffusion evaluated to NaN at x = " +
                                 std::to_string(grid.node(i)));
        d[i] = 0.5 * s * s;
    }

    // Diffusive fluxes are weighted by sigma^2 at the interface relative to
    // the cell average. For smooth nonzero sigma the weight is 1 + O(h^2) and
    // the flux is the plain product difference; where sigma vanishes (the
    // degenerate point of multiplicative noise) the weight goes to zero. The
    // continuum equation carries no flux through such a point, and without
    // the weight the discrete scheme exchanges O(h) mass across it, which
    // keeps mean orbits drifting forever.
    auto interface_weight = [&](int k, double d_lo, double d_hi) {
        const double davg = 0.5 * (d_lo + d_hi);
        if (!(davg > 0.0))
            return 0.0;
        const double s = system.diffusion(grid.interface(k));
        return 0.5 * s * s / davg;
    };

    // Interior interfaces between cells k and k+1:
    //   F = a+ p_k + a- p_{k+1} - theta (d_{k+1} p_{k+1} - d_k p_k)/h,
    // with a = f at the interface. Row k picks up -F/h, row k+1 picks up +F/h,
    // so every interface cancels in column sums and mass is conserved exactly
    // when the boundary fluxes vanish.
    for (int k = 0; k + 1 < n; ++k) {
        const double a = system.drift(r, grid.interface(k + 1));
        const double ap = std::max(a, 0.0);
        const double am = std::min(a, 0.0);
        const double theta = interface_weight(k + 1, d[k], d[k + 1]);
        const double dl = theta * d[k] / h;
        const double dr = theta * d[k + 1] / h;
        op.diag[k] -= (ap + dl) / h;
        op.sup[k] += (-am + dr) / h;
        op.sub[k + 1] += (ap + dl) / h;
        op.diag[k + 1] += (am - dr) / h;
    }

    if (grid.policy == BoundaryPolicy::absorbing) {
        // Ghost density 0: boundary flux only drains the edge cells.
        const double al = system.drift(r, grid.interface(0));
        op.diag[0] += (std::min(al, 0.0) -
                       interface_weight(0, d[0], d[0]) * d[0] / h) /
                      h;
        const double ar = system.drift(r, grid.interface(n));
        op.diag[n - 1] -= (std::max(ar, 0.0) +
                           interface_weight(n, d[n - 1], d[n - 1]) * d[n - 1] / h) /
                          h;
    }
    // Reflecting: boundary flux is zero, nothing to add.

    return op;
}

DensityField delta_init(const Grid& grid, double x0) {
    const double h = grid.h;
    if (!(x0 > grid.x_min + 3.0 * h && x0 < grid.x_max - 3.0 * h)) {
        std::ostringstream msg;
        msg << "x0 = " << x0 << " too close to boundary; need x0 in ("
            << grid.x_min + 3.0 * h << ", " << grid.x_max - 3.0 * h << ")";
        throw ConfigError(msg.str());
    }
    DensityField field;
    field.grid = grid;
    field.time = 0.0;
    field.values.resize(static_cast<std::size_t>(grid.n));
    const double sigma = 2.0 * h;
    double sum = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const double z = (grid.node(i) - x0) / sigma;
        const double v = std::exp(-0.5 * z * z);
        field.values[i] = v;
        sum += v;
    }
    const double scale = 1.0 / (h * sum);
    for (double& v : field.values)
        v *= scale;
    return field;
}

ImplicitStepper::ImplicitStepper(const FpeOperator& op, double dt)
    : dt_(dt), policy_(op.grid.policy), h_(op.grid.h) {
    if (!(dt > 0.0))
        throw ConfigError("dt must be positive, got " + std::to_string(dt));
    const int n = op.grid.n;
    inv_pivot_.resize(static_cast<std::size_t>(n));
    upper_.resize(static_cast<std::size_t>(n));
    lower_.resize(static_cast<std::size_t>(n));
    work_.resize(static_cast<std::size_t>(n));

    // Thomas factorization of M = I - dt L. M is an M-matrix (diag >= 1,
    // off-diagonals <= 0, columns sum to 1 under reflecting walls), so no
    // pivoting is needed and the solve preserves positivity.
    const double pivot_floor = 1e-300;
    double pivot = 1.0 - dt * op.diag[0];
    if (std::abs(pivot) < pivot_floor)
        throw SingularSystemError("tridiagonal pivot underflow at row 0");
    inv_pivot_[0] = 1.0 / pivot;
    upper_[0] = (n > 1 ? -dt * op.sup[0] : 0.0) * inv_pivot_[0];
    lower_[0] = 0.0;
    for (int i = 1; i < n; ++i) {
        lower_[i] = -dt * op.sub[i];
        pivot = (1.0 - dt * op.diag[i]) - lower_[i] * upper_[i - 1];
        if (std::abs(pivot) < pivot_floor)
            throw SingularSystemError("tridiagonal pivot underflow at row " +
                                      std::to_string(i));
        inv_pivot_[i] = 1.0 / pivot;
        upper_[i] = (i + 1 < n ? -dt * op.sup[i] : 0.0) * inv_pivot_[i];
    }
}

void ImplicitStepper::advance(DensityField& field) {
    const int n = static_cast<int>(field.values.size());
    std::vector<double>& p = field.values;

    double mass_before = 0.0;
    if (policy_ == BoundaryPolicy::reflecting) {
        for (double v : p)
            mass_before += v;
    }

    // Forward sweep into work_, back substitution into p.
    work_[0] = p[0] * inv_pivot_[0];
    for (int i = 1; i < n; ++i)
        work_[i] = (p[i] - lower_[i] * work_[i - 1]) * inv_pivot_[i];
    p[n - 1] = work_[n - 1];
    for (int i = n - 2; i >= 0; --i)
        p[i] = work_[i] - upper_[i] * p[i + 1];

    // Clip round-off negatives and track how bad they were.
    double minv = p[0], maxv = p[0];
    for (int i = 1; i < n; ++i) {
        minv = std::min(minv, p[i]);
        maxv = std::max(maxv, p[i]);
    }
    if (minv < 0.0) {
        if (maxv > 0.0)
            stats_.worst_negative_fraction =
                std::max(stats_.worst_negative_fraction, -minv / maxv);
        for (int i = 0; i < n; ++i)
            p[i] = std::max(p[i], 0.0);
    }

    if (policy_ == BoundaryPolicy::reflecting) {
        double mass_after = 0.0;
        for (double v : p)
            mass_after += v;
        if (mass_after > 0.0) {
            const double scale = mass_before / mass_after;
            for (double& v : p)
                v *= scale;
        }
    }

    stats_.boundary_density_max =
        std::max({stats_.boundary_density_max, p[0], p[n - 1]});
    stats_.steps += 1;
    field.time += dt_;
}

DensityField step(const FpeOperator& op, const DensityField& field, double dt,
                  SolverStats* stats) {
    if (field.values.size() != static_cast<std::size_t>(op.grid.n))
        throw ConfigError("operator and field grids disagree");
    ImplicitStepper stepper(op, dt);
    DensityField out = field;
    stepper.advance(out);
    if (stats)
        *stats = stepper.stats();
    return out;
}

void evolve_visit(const SdeSystem& system, double r, const Grid& grid, double x0,
                  const EvolveConfig& cfg,
                  const std::function<bool(const DensityField&)>& visit,
                  SolverStats* stats) {
    if (!(cfg.t_final > 0.0))
        throw ConfigError("t_final must be positive, got " +
                          std::to_string(cfg.t_final));
    if (!(cfg.dt > 0.0) || cfg.dt > cfg.t_final)
        throw ConfigError("dt must satisfy 0 < dt <= t_final");
    if (cfg.sample_stride < 1)
        throw ConfigError("sample_stride must be >= 1");

    const long n_steps = std::max(1L, std::lround(cfg.t_final / cfg.dt));
    FpeOperator op = assemble_operator(system, r, grid);
    ImplicitStepper stepper(op, cfg.dt);
    DensityField field = delta_init(grid, x0);

    bool keep_going = visit(field);
    for (long k = 1; keep_going && k <= n_steps; ++k) {
        stepper.advance(field);
        if (k % cfg.sample_stride == 0 || k == n_steps)
            keep_going = visit(field);
    }
    if (stats)
        *stats = stepper.stats();
}

std::vector<DensityField> evolve(const SdeSystem& system, double r, const Grid& grid,
                                 double x0, const EvolveConfig& cfg,
                                 SolverStats* stats) {
    std::vector<DensityField> snapshots;
    evolve_visit(
        system, r, grid, x0, cfg,
        [&](const DensityField& f) {
            snapshots.push_back(f);
            return true;
        },
        stats);
    return snapshots;
}

} // namespace stobif
