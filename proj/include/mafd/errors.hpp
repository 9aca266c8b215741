#pragma once

#include <stdexcept>
#include <string>

namespace mafd {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonHermitianInput : public Error {
public:
    using Error::Error;
};

class RankOutOfRange : public Error {
public:
    using Error::Error;
};

class SpectralRadiusTooLarge : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class PointOutsideSearchDisk : public Error {
public:
    using Error::Error;
};

class PoleHit : public Error {
public:
    using Error::Error;
};

class ZeroHit : public Error {
public:
    using Error::Error;
};

class ZeroPointForbidden : public Error {
public:
    using Error::Error;
};

class PreconditionViolated : public Error {
public:
    using Error::Error;
};

class UnobservablePair : public Error {
public:
    using Error::Error;
};

/// Thrown by the selection search when the input has no extractable energy;
/// the decomposition loop treats it as normal termination.
class ZeroFunction : public Error {
public:
    using Error::Error;
};

class NotRealSpectrum : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class SchemaVersionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

} // namespace mafd
