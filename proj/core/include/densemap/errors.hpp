#pragma once

#include <stdexcept>
#include <string>

namespace densemap {

/// Base class for everything the toolkit throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad arguments, violated invariants, mismatched dimensions.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents (bad magic, truncated payload, unparsable header).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failures (missing file, unwritable path).
class IoError : public Error {
public:
    using Error::Error;
};

/// A referenced entity (frame id, track id) does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Input is structurally valid but carries no usable signal
/// (empty support with a positive target count, zero variance, zero mass).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Linear system has no unique solution (rank-deficient with no ridge term).
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Instance exceeds a solver's hard size cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A computation produced a non-finite value that the caller must see.
class OverflowError : public Error {
public:
    using Error::Error;
};

} // namespace densemap
