#include "stobif/system.hpp"

#include <set>
#include <sstream>
#include <utility>

#include "stobif/errors.hpp"

namespace stobif {

namespace {

double powi(double x, int p) {
    double acc = 1.0;
    for (int i = 0; i < p; ++i)
        acc *= x;
    return acc;
}

void validate_spec(const PolySpec& spec, const char* what, bool allow_r) {
    std::set<int> seen;
    for (const auto& term : spec) {
        if (term.power < 0)
            throw ConfigError(std::string(what) + ": negative power " +
                              std::to_string(term.power));
        if (!seen.insert(term.power).second)
            throw ConfigError(std::string(what) + ": duplicate power " +
                              std::to_string(term.power));
        if (!allow_r && term.r_coeff != 0.0)
            throw ConfigError(std::string(what) +
                              ": diffusion terms cannot depend on r");
    }
}

} // namespace

double eval_poly(const PolySpec& spec, double r, double x) {
    double sum = 0.0;
    for (const auto& term : spec)
        sum += (term.coeff + term.r_coeff * r) * powi(x, term.power);
    return sum;
}

SdeSystem::SdeSystem(std::string name, PolySpec drift_spec, PolySpec diffusion_spec)
    : name_(std::move(name)),
      drift_spec_(std::move(drift_spec)),
      diffusion_spec_(std::move(diffusion_spec)),
      serializable_(true) {
    validate_spec(drift_spec_, "drift", true);
    validate_spec(diffusion_spec_, "diffusion", false);
    drift_ = [spec = drift_spec_](double r, double x) { return eval_poly(spec, r, x); };
    diffusion_ = [spec = diffusion_spec_](double x) { return eval_poly(spec, 0.0, x); };
}

SdeSystem::SdeSystem(std::string name, DriftFn drift, DiffusionFn diffusion)
    : name_(std::move(name)),
      drift_(std::move(drift)),
      diffusion_(std::move(diffusion)),
      serializable_(false) {}

SdeSystem SdeSystem::with_zero_diffusion() const {
    if (serializable_) {
        SdeSystem out(name_, drift_spec_, PolySpec{});
        return out;
    }
    return SdeSystem(name_, drift_, [](double) { return 0.0; });
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"saddle-node", "transcritical",
                                                   "pitchfork"};
    return names;
}

SdeSystem lookup_builtin(const std::string& name) {
    // sigma(x) = x for all three prototypes.
    const PolySpec sigma_x = {{1, 1.0, 0.0}};
    if (name == "saddle-node") // f = r + x^2
        return SdeSystem(name, {{0, 0.0, 1.0}, {2, 1.0, 0.0}}, sigma_x);
    if (name == "transcritical") // f = r x - x^2
        return SdeSystem(name, {{1, 0.0, 1.0}, {2, -1.0, 0.0}}, sigma_x);
    if (name == "pitchfork") // f = r x - x^3
        return SdeSystem(name, {{1, 0.0, 1.0}, {3, -1.0, 0.0}}, sigma_x);

    std::ostringstream msg;
    msg << "unknown system \"" << name << "\"; valid names:";
    for (const auto& key : builtin_names())
        msg << " " << key;
    throw ConfigError(msg.str());
}

SdeSystem parse_polynomial_system(const PolySpec& drift_coeffs,
                                  const PolySpec& diffusion_coeffs,
                                  const std::string& name) {
    return SdeSystem(name, drift_coeffs, diffusion_coeffs);
}

} // namespace stobif
