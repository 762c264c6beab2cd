#pragma once

#include <stdexcept>
#include <string>

namespace tubeform {

// Base for all errors raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

// Coincident or antipodal endpoints for initial_direction.
class UndefinedDirection : public Error {
public:
    using Error::Error;
};

// Degenerate first fundamental form or an immersion off the model.
class RegularityError : public Error {
public:
    using Error::Error;
};

// Gauss-Bonnet residual too large to round to an Euler characteristic.
class QuadratureFailure : public Error {
public:
    using Error::Error;
};

// Offset radius at or beyond a focal distance.
class FocalSingularity : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

class OracleUnreliable : public Error {
public:
    using Error::Error;
};

class IllConditioned : public Error {
public:
    using Error::Error;
};

} // namespace tubeform
