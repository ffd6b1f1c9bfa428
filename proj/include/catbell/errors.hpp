#pragma once

#include <stdexcept>
#include <string>

namespace catbell {

// Fock truncation too small for a requested coherent amplitude; carries the
// dimension that would satisfy the tail criterion.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, int required)
        : std::runtime_error(what), required_dim(required) {}
    int required_dim;
};

// operand shapes disagree (or a tensor product would overflow)
class DimensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// state definition with (numerically) vanishing norm, e.g. theta = pi at alpha = 0
class DegenerateStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// parameter outside the domain of a formula branch
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// integrator failed to reach its accuracy target within the refinement cap
class StepSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CLI / config-file validation failure
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace catbell
