#pragma once

#include <stdexcept>
#include <string>

namespace tpc {

// Data-driven failures: malformed input files, inconsistent cells, empty
// cohorts, incompatible models. CLI exit code 1.
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string &msg) : std::runtime_error(msg) {}
};

// Caller mistakes: bad arguments, out-of-range parameters, configurations
// that cannot produce a model. CLI exit code 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace tpc
