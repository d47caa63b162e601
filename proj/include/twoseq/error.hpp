#pragma once

#include <stdexcept>
#include <string>

namespace twoseq {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter inequality (e.g. 0 < epsilon <= beta < 0.5) does not hold.
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

class DegenerateSize : public Error {
public:
    using Error::Error;
};

/// A mean-pair layout does not fit into the vector length.
class ConfigInfeasible : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// A one-sequence estimator was handed two sequences, or vice versa.
class ArityMismatch : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class InsufficientPoints : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace twoseq
