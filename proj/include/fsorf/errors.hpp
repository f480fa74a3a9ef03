#pragma once

#include <stdexcept>
#include <string>

namespace fsorf {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Series, quadrature or root search did not reach its tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter class the evaluator deliberately does not handle.
struct UnsupportedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A computed metric left its admissible range.
struct SanityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fsorf
