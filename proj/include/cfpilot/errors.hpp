#pragma once

#include <stdexcept>

namespace cfpilot {

// Move violates capacity bounds or is not a move (same cluster).
struct InfeasibleMoveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Enumeration or iteration budget exhausted before completion.
struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested simulation exceeds the configured size budget.
struct InstanceTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cfpilot
