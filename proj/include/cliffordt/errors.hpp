#pragma once

#include <stdexcept>
#include <string>

namespace cliffordt {

/// Invalid configuration value (sizes, enum choices, budgets).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller violated an operation's precondition (qubit out of range, odd N, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Not enough samples to compute a statistic.
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cliffordt
