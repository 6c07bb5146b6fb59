#pragma once

#include <stdexcept>
#include <string>

namespace peakcap {

// Invalid user-facing input: malformed config, inconsistent scenario fields,
// out-of-domain arguments. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A numerical routine failed to meet its convergence contract (quadrature
// refinement cap hit, eigensolver failure with no fallback). Exit code 3.
class NumericsError : public std::runtime_error {
 public:
  explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace peakcap
