#pragma once

#include <stdexcept>
#include <string>

namespace qdeph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible with the requested operation.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A numeric precondition failed: non-Hermitian, non-unitary, invalid state,
/// operator that does not commute with the copy map, bad weights.
class InvariantError : public Error {
public:
    using Error::Error;
};

/// A dense intermediate would exceed the configured size limit.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Malformed or semantically invalid JSON input.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace qdeph
