#include "stobif/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stobif/errors.hpp"

namespace stobif {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

// Parses [[a, b, c], [d, e, f], ...]; empty [] is allowed.
std::vector<std::vector<double>> parse_array(const std::string& text, int line_no) {
    std::vector<std::vector<double>> rows;
    std::size_t i = 0;
    auto fail = [&](const std::string& why) -> void {
        throw ConfigError("config line " + std::to_string(line_no) + ": " + why);
    };
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    };
    auto expect = [&](char c) {
        skip_ws();
        if (i >= text.size() || text[i] != c)
            fail(std::string("expected '") + c + "' in array");
        ++i;
    };

    expect('[');
    skip_ws();
    while (i < text.size() && text[i] != ']') {
        expect('[');
        std::vector<double> row;
        skip_ws();
        while (i < text.size() && text[i] != ']') {
            std::size_t consumed = 0;
            double v = 0.0;
            try {
                v = std::stod(text.substr(i), &consumed);
            } catch (const std::exception&) {
                fail("expected number in array");
            }
            row.push_back(v);
            i += consumed;
            skip_ws();
            if (i < text.size() && text[i] == ',') {
                ++i;
                skip_ws();
            }
        }
        expect(']');
        rows.push_back(std::move(row));
        skip_ws();
        if (i < text.size() && text[i] == ',') {
            ++i;
            skip_ws();
        }
    }
    expect(']');
    skip_ws();
    if (i != text.size())
        fail("trailing characters after array");
    return rows;
}

ConfigValue parse_value(const std::string& raw, int line_no) {
    ConfigValue value;
    const std::string text = trim(raw);
    if (text.empty())
        throw ConfigError("config line " + std::to_string(line_no) + ": empty value");
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"')
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": unterminated string");
        value.kind = ConfigValue::Kind::string;
        value.text = text.substr(1, text.size() - 2);
        return value;
    }
    if (text.front() == '[') {
        value.kind = ConfigValue::Kind::array;
        value.array = parse_array(text, line_no);
        value.text = text;
        return value;
    }
    try {
        std::size_t consumed = 0;
        value.number = std::stod(text, &consumed);
        if (consumed == text.size()) {
            value.kind = ConfigValue::Kind::number;
            value.text = text;
            return value;
        }
    } catch (const std::exception&) {
        // fall through: bare word
    }
    value.kind = ConfigValue::Kind::string;
    value.text = text;
    return value;
}

} // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#')
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        map[key] = parse_value(stripped.substr(eq + 1), line_no);
    }
    return map;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

PolySpec poly_spec_from_rows(const std::vector<std::vector<double>>& rows,
                             const std::string& key) {
    PolySpec spec;
    for (const auto& row : rows) {
        if (row.size() != 3)
            throw ConfigError(key + ": each term needs [power, coeff, r_coeff], got " +
                              std::to_string(row.size()) + " entries");
        const double p = row[0];
        if (p < 0 || p != std::floor(p))
            throw ConfigError(key + ": power must be a nonnegative integer");
        spec.push_back({static_cast<int>(p), row[1], row[2]});
    }
    return spec;
}

std::optional<SdeSystem> system_from_config(const ConfigMap& map) {
    const auto sys_it = map.find("system");
    const auto drift_it = map.find("drift");
    const auto diff_it = map.find("diffusion");

    if (sys_it != map.end()) {
        if (drift_it != map.end() || diff_it != map.end())
            throw ConfigError("give either system = \"name\" or drift/diffusion "
                              "arrays, not both");
        return lookup_builtin(sys_it->second.text);
    }
    if (drift_it == map.end() && diff_it == map.end())
        return std::nullopt;
    if (drift_it == map.end() || diff_it == map.end())
        throw ConfigError("polynomial systems need both drift and diffusion arrays");
    if (drift_it->second.kind != ConfigValue::Kind::array ||
        diff_it->second.kind != ConfigValue::Kind::array)
        throw ConfigError("drift and diffusion must be arrays like [[0, 0, 1]]");
    return parse_polynomial_system(poly_spec_from_rows(drift_it->second.array, "drift"),
                                   poly_spec_from_rows(diff_it->second.array,
                                                       "diffusion"));
}

} // namespace stobif
