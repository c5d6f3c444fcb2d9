// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace aclab {

// Invalid user input: bad model parameters, malformed configs, bad windows.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure: non-convergence, singular resolvent, extremum on a
// window boundary. Distinct from ConfigError so callers can map it to a
// different process exit code.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace aclab
