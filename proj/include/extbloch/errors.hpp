#pragma once

#include <stdexcept>
#include <string>

namespace extbloch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (log of 0, shape in {0,1}, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed or invalid triangulation document.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Combinatorial data violating a structural invariant (gluings, orientation).
class TopologyError : public Error {
public:
    using Error::Error;
};

/// Four boundary points that fail to be pairwise distinct.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Newton iteration or path continuation that did not converge.
class SolverError : public Error {
public:
    using Error::Error;
};

/// No flattening could be produced (non-integral residues, no integer solution).
class FlatteningError : public Error {
public:
    using Error::Error;
};

} // namespace extbloch
