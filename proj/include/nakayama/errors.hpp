#pragma once

#include <stdexcept>
#include <string>

namespace nakayama {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FieldMismatch : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class AlgebraMismatch : public Error {
public:
    using Error::Error;
};

/// Malformed algebra spec or module literal. `field()` names the offending key when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::string field = {})
        : Error(what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Ext^1(X, X) (or a higher Ext) does not vanish where a construction needs it to.
class RigidityError : public Error {
public:
    using Error::Error;
};

/// An operation that needs a certified maximal n-orthogonal set got a refuted one.
class NotVerified : public Error {
public:
    using Error::Error;
};

/// A postcondition that the mathematics guarantees failed. Always a bug.
class InvariantBreach : public Error {
public:
    using Error::Error;
};

}  // namespace nakayama
