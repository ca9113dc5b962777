#pragma once

#include <stdexcept>
#include <string>

namespace unfold {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or unsupported input data (bad OFF/OBJ syntax, degenerate face,
/// inconsistent topology).
struct FormatError : Error {
    using Error::Error;
};

/// Input vertices are not in convex position, or the surface is not a closed
/// genus-zero polyhedron.  `vertex` is the first offending vertex index, or -1.
struct ConvexityError : Error {
    int vertex = -1;
    ConvexityError(const std::string& what, int v) : Error(what), vertex(v) {}
};

/// An argument is outside an operation's domain (point not in a star, equal
/// endpoint heights, mismatched path endpoints, lambda < 1, ...).
struct DomainError : Error {
    using Error::Error;
};

/// The mesh is not in general position for the chosen direction: tied top or
/// bottom vertex, or a horizontal edge.
struct GeneralPositionError : Error {
    using Error::Error;
};

/// A cut tree failed validation (not spanning, not acyclic, edge not on the
/// mesh, monotonicity violated).
struct TreeError : Error {
    using Error::Error;
};

/// A construction that is guaranteed to succeed on valid input failed anyway;
/// carries a trace of the failing step.
struct InternalError : Error {
    using Error::Error;
};

/// Filesystem-level failure: missing input, unwritable output.
struct IOError : Error {
    using Error::Error;
};

}  // namespace unfold
