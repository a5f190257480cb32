#pragma once

#include <stdexcept>
#include <string>

namespace tldg {

/// Raised when a linear solve or a runtime invariant check fails.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a scheme configuration cannot be set up (e.g. the system
/// matrix fails to factor).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tldg
