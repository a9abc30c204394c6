#pragma once

#include <stdexcept>
#include <string>

namespace thinfilm {

// Argument outside the mathematical domain of a formula.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Parameters valid in isolation, but outside the asymptotic regime of a law.
struct RegimeError : std::domain_error {
    using std::domain_error::domain_error;
};

// An improper integral that does not converge for the requested exponent.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Step-size underflow in an ODE integration.
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The bisection scan found no sign change in the classification.
struct NoSeparatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The near-field series is not accurate at the requested start point.
struct SeedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time step fell below dt_min; carries no trajectory, the caller keeps it.
struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration value rejected. `key` names the offending entry.
struct ConfigError : std::invalid_argument {
    ConfigError(std::string key_, const std::string& what)
        : std::invalid_argument(key_ + ": " + what), key(std::move(key_)) {}
    std::string key;
};

}  // namespace thinfilm
