#pragma once

#include <stdexcept>
#include <string>

namespace evo {

/// Malformed arguments: mismatched lengths, empty inputs, out-of-range counts.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke a documented precondition (e.g. non-positive fitness under
/// fitness-proportional selection).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Inconsistent run configuration.
class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No feasible individual could be produced within the retry budget.
class InitializationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace evo
