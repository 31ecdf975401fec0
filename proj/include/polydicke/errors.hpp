#pragma once

#include <stdexcept>
#include <string>

namespace polydicke {

// Malformed input: invalid system, bad axes, unknown transition. CLI exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Basis would exceed the configured memory budget. CLI exit code 2.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative procedure exhausted its budget. CLI exit code 2.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// A search found nothing where the caller asked (no separatrix root, no jump).
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace polydicke
