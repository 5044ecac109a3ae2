#pragma once

#include <stdexcept>

namespace qrlab {

// Error taxonomy shared by the library and the CLI. The CLI maps these to
// process exit codes: ValidationError -> 2, BudgetError -> 3,
// InternalError -> 4. Anything else escaping to main is a bug.

// A caller-supplied value violates a precondition (bad field size, duplicate
// subset entries, parameter out of its admissible range, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The request is well formed but exceeds a hard work budget (e.g. an
// exhaustive scan over more than 10^7 coefficient vectors).
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal invariant failed: an "impossible" state such as a character-sum
// bound violation or a rejection sampler running past its retry cap.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace qrlab
