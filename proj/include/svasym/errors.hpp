#pragma once

#include <stdexcept>
#include <string>

namespace svasym {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Iterative method (quadrature, Richardson check, root search) missed its tolerance.
struct NonConvergent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem size exceeds a fixed memory or enumeration guard.
struct CapacityExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact integer arithmetic would overflow.
struct Overflow : std::overflow_error {
    using std::overflow_error::overflow_error;
};

// Requested rho lies beyond the critical point: no phase transition exists.
struct NoTransition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid user configuration (CLI flags, JSON config, unknown targets).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnknownTarget : ConfigError {
    using ConfigError::ConfigError;
};

}  // namespace svasym
