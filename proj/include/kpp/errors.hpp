#pragma once

#include <stdexcept>
#include <string>

namespace kpp {

// Eigen-solve failures.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NegativeEigenvectorEntry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The grid cannot represent the requested operator with nonnegative
/// off-diagonal couplings (cell Peclet number too large).
struct GridTooCoarse : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// k_0 <= 0: the medium does not support a positive spreading speed.
struct HypothesisViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BracketFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Time integration failures.
struct StabilityViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NegativityBreach : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FrontReachedBoundary : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range configuration input. Maps to CLI exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace kpp
