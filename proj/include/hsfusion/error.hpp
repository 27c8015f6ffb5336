#pragma once

#include <stdexcept>
#include <string>

namespace hsfusion {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter value outside its documented domain (e.g. a non-positive threshold).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Inconsistent shapes, band counts or grid divisibility.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// File missing, unreadable, unwritable or malformed.
class IoError : public Error {
public:
    using Error::Error;
};

/// Non-finite values, divergence or rank-deficient solves.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace hsfusion
