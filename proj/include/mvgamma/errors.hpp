#pragma once

#include <stdexcept>
#include <string>

namespace mvgamma {

/// Raised when an argument violates an operation's precondition. The message
/// names the violated condition, e.g. "requires 2*alpha > p2 - 1".
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure fails on otherwise valid input
/// (factorization breakdown, series non-convergence, quadrature failure).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed matrix / CSV text.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw PreconditionError(what);
}

}  // namespace mvgamma
