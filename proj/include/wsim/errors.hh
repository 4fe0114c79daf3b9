#pragma once

#include <stdexcept>
#include <string>

namespace wsim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Misuse of an operation: semiring kind mismatch, shape mismatch,
/// parameter out of range.  Maps to CLI exit code 3.
struct UsageError : Error {
    using Error::Error;
};

/// Malformed input text or file.  Maps to CLI exit code 3.
struct InputError : Error {
    using Error::Error;
};

}  // namespace wsim
