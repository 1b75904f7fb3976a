#pragma once

#include <stdexcept>
#include <string>

namespace banksim {

// Bad user-supplied parameters or config files. CLI maps this to exit code 1.
struct config_error : std::invalid_argument {
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

// Evaluation outside the interval an object is defined on.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Operating on a system state that cannot support the operation
// (e.g. all banks already removed).
struct state_error : std::runtime_error {
    explicit state_error(const std::string& what) : std::runtime_error(what) {}
};

// The tracking-mean denominator dropped below the floor while extracting
// rate functions from a value-function solution.
struct singular_denominator_error : std::runtime_error {
    explicit singular_denominator_error(const std::string& what) : std::runtime_error(what) {}
};

// No admissible policy candidate exists for a decision.
struct governance_error : std::runtime_error {
    explicit governance_error(const std::string& what) : std::runtime_error(what) {}
};

// File system failures on output. CLI maps this to exit code 3.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace banksim
