#pragma once

#include <stdexcept>
#include <string>

namespace fwopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands have incompatible tags or shapes.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A norm kind was requested for a point type that does not support it.
class InvalidNormError : public Error {
public:
    using Error::Error;
};

/// Non-finite values, iteration caps, or other floating-point failures.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Input is zero (or otherwise degenerate) where a direction is required.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// A point lies outside its constraint set beyond tolerance.
class FeasibilityError : public Error {
public:
    using Error::Error;
};

/// A SharedSample was replayed against an oracle that did not produce it.
class ProvenanceError : public Error {
public:
    using Error::Error;
};

/// Optimizer parameters fall outside the domain of the Lion/Muon -> SFW mapping.
class MappingDomainError : public Error {
public:
    using Error::Error;
};

/// Step size violates the convex-combination requirement (eta in (0, 1]).
class StepSizeError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration; the message names the offending key.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; the message carries the line number.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace fwopt
