#pragma once

#include <stdexcept>
#include <string>

namespace chemoflow {

/// Invalid or malformed configuration (maps to exit code 2).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Solver failed to converge or produced an unusable state (exit code 3).
class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chemoflow
