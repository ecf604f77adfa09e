#pragma once

#include <functional>
#include <string>
#include <vector>

namespace stobif {

/// One polynomial term (coeff + r_coeff*r) * x^power.
struct PolyTerm {
    int power = 0;
    double coeff = 0.0;
    double r_coeff = 0.0;
};

using PolySpec = std::vector<PolyTerm>;

/// Evaluate a polynomial spec at (r, x), terms summed in list order.
double eval_poly(const PolySpec& spec, double r, double x);

/// A scalar SDE  dX = f(r, X) dt + sigma(X) dB.
///
/// Systems built from polynomial coefficient lists are serializable to
/// config files and evaluate drift/diffusion directly from those lists, so
/// serialization round-trips exactly. Arbitrary callables are accepted too
/// but cannot be written to a config file.
class SdeSystem {
public:
    using DriftFn = std::function<double(double r, double x)>;
    using DiffusionFn = std::function<double(double x)>;

    /// Polynomial-backed system. Throws ConfigError on duplicate powers,
    /// negative powers, or r-dependent diffusion terms.
    SdeSystem(std::string name, PolySpec drift_spec, PolySpec diffusion_spec);

    /// Closure-backed system (not serializable).
    SdeSystem(std::string name, DriftFn drift, DiffusionFn diffusion);

    double drift(double r, double x) const { return drift_(r, x); }
    double diffusion(double x) const { return diffusion_(x); }

    const std::string& name() const { return name_; }
    bool serializable() const { return serializable_; }
    const PolySpec& drift_spec() const { return drift_spec_; }
    const PolySpec& diffusion_spec() const { return diffusion_spec_; }

    /// Same drift with sigma == 0 (deterministic limit).
    SdeSystem with_zero_diffusion() const;

private:
    std::string name_;
    DriftFn drift_;
    DiffusionFn diffusion_;
    PolySpec drift_spec_;
    PolySpec diffusion_spec_;
    bool serializable_ = false;
};

/// Names of the built-in systems: saddle-node, transcritical, pitchfork.
const std::vector<std::string>& builtin_names();

/// Look up a built-in system by name; throws ConfigError listing valid keys.
SdeSystem lookup_builtin(const std::string& name);

/// Build a system from polynomial coefficient lists.
/// Each entry (power, coeff, r_coeff) contributes (coeff + r_coeff*r)*x^power.
SdeSystem parse_polynomial_system(const PolySpec& drift_coeffs,
                                  const PolySpec& diffusion_coeffs,
                                  const std::string& name = "polynomial");

} // namespace stobif
