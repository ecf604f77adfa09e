// Test-only oracles, independent of the library's solver path.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

/// Classic RK4 with fixed step; reference for deterministic mean orbits.
inline double rk4(const std::function<double(double)>& f, double x0, double t_final,
                  double dt) {
    double x = x0;
    const long n = std::lround(t_final / dt);
    for (long i = 0; i < n; ++i) {
        const double k1 = f(x);
        const double k2 = f(x + 0.5 * dt * k1);
        const double k3 = f(x + 0.5 * dt * k2);
        const double k4 = f(x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

/// Gaussian density with mean mu and variance var.
inline double gaussian_pdf(double x, double mu, double var) {
    const double z = (x - mu);
    return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * M_PI * var);
}

/// E[X_t] = x0 exp(r t) for dX = r X dt + s X dB under the Ito convention.
inline double gbm_mean(double x0, double r, double t) { return x0 * std::exp(r * t); }

struct Root {
    double x;
    bool stable; // sign of f'(x) < 0
};

/// Closed-form roots and stability of the builtin drifts; r must not sit at
/// the degenerate bifurcation value (f'(root) == 0).
inline std::vector<Root> saddle_node_roots(double r) {
    if (r >= 0.0)
        return {};
    const double s = std::sqrt(-r);
    return {{-s, true}, {s, false}}; // f' = 2x
}

inline std::vector<Root> transcritical_roots(double r) {
    // f = r x - x^2, roots 0 and r; f' = r - 2x.
    if (r < 0.0)
        return {{r, false}, {0.0, true}};
    return {{0.0, false}, {r, true}};
}

inline std::vector<Root> pitchfork_roots(double r) {
    // f = r x - x^3, f' = r - 3 x^2.
    if (r <= 0.0)
        return {{0.0, true}};
    const double s = std::sqrt(r);
    return {{-s, true}, {0.0, false}, {s, true}};
}

} // namespace oracles
