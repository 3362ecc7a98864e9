#pragma once

#include <stdexcept>
#include <string>

namespace chebcast {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (range, shape, ordering).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The ridge normal matrix could not be factorized.
class FitError : public Error {
public:
    using Error::Error;
};

/// A forecaster could not produce a prediction from its current cache/state.
class ForecastError : public Error {
public:
    using Error::Error;
};

/// Malformed or unknown entries in an experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace chebcast
