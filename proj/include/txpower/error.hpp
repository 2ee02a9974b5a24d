#pragma once

#include <stdexcept>
#include <string>

namespace txpower {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value outside the mathematical domain of an operation (log of zero,
/// non-finite power, non-positive frequency).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Survey data could not be read or validated.
class DataError : public Error {
public:
    using Error::Error;
};

/// A regression could not be carried out on the given points.
class FitError : public Error {
public:
    using Error::Error;
};

/// A model query landed on an unphysical efficiency (<= 0 or > 1).
class ModelRangeError : public Error {
public:
    using Error::Error;
};

/// Malformed serialized model / table.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace txpower
