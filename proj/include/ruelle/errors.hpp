#pragma once

#include <stdexcept>
#include <string>

namespace ruelle {

// Configuration / precondition violations (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

// A computation would exceed its orbit or matrix budget (CLI exit code 3).
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string &msg) : std::runtime_error(msg) {}
};

// A numerical routine failed, e.g. an eigensolver did not converge (CLI exit code 4).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace ruelle
