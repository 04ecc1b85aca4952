#pragma once

#include <stdexcept>
#include <string>

namespace owc {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// degenerate vectors, unreachable orientations, ambiguous inversions
struct GeometryError : SimError {
    using SimError::SimError;
};

// scenario parsing / validation failures
struct ConfigError : SimError {
    using SimError::SimError;
};

// blocker placement saturation that cannot be recovered
struct PlacementError : SimError {
    using SimError::SimError;
};

// API misuse (stepping a finished episode, mismatched state, ...)
struct ContractError : SimError {
    using SimError::SimError;
};

// instance too large for the configured enumeration budget
struct BudgetError : SimError {
    using SimError::SimError;
};

}  // namespace owc
