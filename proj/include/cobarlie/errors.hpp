#pragma once

#include <stdexcept>
#include <string>

namespace cobarlie {

// Malformed or out-of-contract input (bad JSON, window violations, ...).
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A certificate or self-check failed: some identity did not hold exactly.
struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested computation exceeds the configured size budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cobarlie
