#pragma once

#include <stdexcept>
#include <string>

namespace mcvd {

/// Input outside the mathematical domain of an operation (non-positive time,
/// negative variance, index out of range, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its accuracy target.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Optimization bounds admit no feasible point.
class InfeasibleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mcvd
