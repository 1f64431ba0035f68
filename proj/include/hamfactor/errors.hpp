#pragma once

#include <stdexcept>
#include <string>

namespace hamfactor {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dimension mismatch in a matrix operation.
struct ShapeError : Error {
    using Error::Error;
};

/// Malformed textual input (rational literals, JSON documents).
struct ParseError : Error {
    using Error::Error;
};

/// Structurally well-formed input that violates a model constraint.
struct ValidationError : Error {
    using Error::Error;
};

/// Bad caller-supplied data: unknown parameter names, missing assignments.
struct InputError : Error {
    using Error::Error;
};

/// Precondition violation on a mathematical contract (e.g. D not symmetric).
struct ContractError : Error {
    using Error::Error;
};

/// Invariant that must hold by construction failed; always a bug.
struct InternalError : Error {
    using Error::Error;
};

} // namespace hamfactor
