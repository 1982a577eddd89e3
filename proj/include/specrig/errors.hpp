#pragma once

#include <stdexcept>
#include <string>

namespace specrig {

/// Invalid user input: bad config values, out-of-range arguments, malformed files.
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure at runtime: solver non-convergence, bracketing failure,
/// quadrature breakdown. The CLI maps this to exit code 1.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace specrig
