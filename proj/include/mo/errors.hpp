#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mo {

// Invalid argument value (negative u, malformed curve, bad weights).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Two objects built on different grids were combined.
struct GridMismatch : std::invalid_argument {
  GridMismatch() : std::invalid_argument("grid mismatch") {}
};

// An operation was called outside the hypotheses it needs.
struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

// Bracketing overflowed (e.g. a norm that is infinite for every scale).
struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A sampled point broke a certified inequality.
struct VerificationError : std::runtime_error {
  VerificationError(const std::string& what, std::vector<double> sample, double observed, double bound)
      : std::runtime_error(what), sample(std::move(sample)), observed(observed), bound(bound) {}
  std::vector<double> sample;
  double observed;
  double bound;
};

}  // namespace mo
