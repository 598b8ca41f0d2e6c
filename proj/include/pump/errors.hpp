#pragma once

#include <stdexcept>
#include <string>

namespace pump {

/// Invalid parameters, malformed config files, unknown keys.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Norm drift, non-unitary propagators, non-converged integrals, I/O failures.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pump
