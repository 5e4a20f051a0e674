#pragma once

#include <stdexcept>
#include <string>

namespace scnn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tensor extents do not fit the operation.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid hyperparameter or layer configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input value outside the domain of a function (e.g. a probability of 1).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A checked structural precondition (symmetry, Cartesian layout) failed.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss.
class TrainingError : public Error {
public:
    TrainingError(const std::string& what, int epoch) : Error(what), epoch_(epoch) {}
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

/// A finite-difference oracle met a non-finite loss value.
class OracleError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace scnn
