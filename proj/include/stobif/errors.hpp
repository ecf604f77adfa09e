#pragma once

#include <stdexcept>
#include <string>

namespace stobif {

/// Invalid user-supplied configuration or precondition violation.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Numerical failure inside a solver.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Tridiagonal solve broke down (pivot underflow).
class SingularSystemError : public NumericalError {
public:
    explicit SingularSystemError(const std::string& msg) : NumericalError(msg) {}
};

/// Density mass fell below the usable threshold.
class VanishedMassError : public NumericalError {
public:
    explicit VanishedMassError(const std::string& msg) : NumericalError(msg) {}
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace stobif
