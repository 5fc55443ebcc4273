#pragma once

#include <stdexcept>
#include <string>

namespace hypercluster {

/// Base of every error the library throws. The CLI maps the subclasses to
/// distinct process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes or lengths that do not line up.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Malformed input files, schema violations, bad magic numbers.
class FormatError : public Error {
public:
    using Error::Error;
};

/// NaN/Inf in a loss or gradient, or a numerically degenerate request.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Invalid arguments to an operation (K > N, empty sets, r = 0, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

} // namespace hypercluster
