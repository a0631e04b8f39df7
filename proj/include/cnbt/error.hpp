#pragma once

#include <stdexcept>
#include <string>

namespace cnbt {

/// Raised when caller-supplied data violates a documented precondition
/// (malformed graphs, out-of-range parameters, bad files).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot deliver its contract
/// (eigensolver non-convergence, normalization underflow).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

}  // namespace detail
}  // namespace cnbt
