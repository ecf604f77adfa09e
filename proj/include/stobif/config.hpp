#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stobif/system.hpp"

namespace stobif {

/// Parsed value of one "key = value" config line.
struct ConfigValue {
    enum class Kind { string, number, array } kind = Kind::string;
    std::string text;                            // string form (unquoted)
    double number = 0.0;                         // valid when kind == number
    std::vector<std::vector<double>> array;      // valid when kind == array
};

using ConfigMap = std::map<std::string, ConfigValue>;

/// Parses a key-value config file. Lines are `key = value`; values are a
/// quoted string, a number, or a nested array like [[0, 0, 1], [2, 1, 0]].
/// Blank lines and lines starting with # are skipped. Throws ConfigError on
/// malformed input, IoError if the file cannot be read.
ConfigMap parse_config_file(const std::string& path);

/// Same, from an already-loaded string (for tests).
ConfigMap parse_config_text(const std::string& text);

/// Builds the system selected by a config map: either
///   system = "<builtin name>"
/// or
///   drift = [[power, coeff, r_coeff], ...]
///   diffusion = [[power, coeff, r_coeff], ...]
/// Returns nullopt when the map contains no system selection.
std::optional<SdeSystem> system_from_config(const ConfigMap& map);

/// Converts a [[power, coeff, r_coeff], ...] array into a PolySpec.
PolySpec poly_spec_from_rows(const std::vector<std::vector<double>>& rows,
                             const std::string& key);

} // namespace stobif
