#pragma once

#include <stdexcept>
#include <string>

namespace gramcov {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct ZeroNormColumn : Error {
    using Error::Error;
};

struct ZeroNormRow : Error {
    using Error::Error;
};

struct NotNormalized : Error {
    using Error::Error;
};

struct NotStandardized : Error {
    using Error::Error;
};

struct NotDoublyNormalized : Error {
    using Error::Error;
};

struct UnknownLoss : Error {
    using Error::Error;
};

struct DivergedLoss : Error {
    DivergedLoss(const std::string& what, int epoch_) : Error(what), epoch(epoch_) {}
    int epoch;
};

struct InvalidArgument : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace gramcov
