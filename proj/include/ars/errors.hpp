#pragma once

#include <stdexcept>
#include <string>

namespace ars {

/// Base class for all errors raised by the library. Messages are prefixed
/// with the operation that failed, e.g. "build_ar_design: ...".
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input data (missing column, non-finite cell, ...).
struct DataError : Error {
    using Error::Error;
};

/// A design matrix is rank deficient or numerically collinear.
struct SingularDesignError : Error {
    using Error::Error;
};

/// The LP solver exhausted its iteration or breakpoint budget.
struct SolverError : Error {
    using Error::Error;
};

/// Invalid simulation or study configuration.
struct ConfigError : Error {
    using Error::Error;
};

/// File system or serialization failure.
struct IoError : Error {
    using Error::Error;
};

/// Command line could not be parsed; main() exits with status 2.
struct UsageError : Error {
    using Error::Error;
};

}  // namespace ars
