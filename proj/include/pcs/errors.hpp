#pragma once

#include <stdexcept>
#include <string>

namespace pcs {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An operation that needs at least one point was given an empty cloud.
struct EmptyCloud : Error {
    explicit EmptyCloud(const std::string& msg = "operation requires a non-empty cloud")
        : Error(msg) {}
};

/// A reference mesh with zero triangles was supplied.
struct EmptyMesh : Error {
    explicit EmptyMesh(const std::string& msg = "operation requires a non-empty mesh")
        : Error(msg) {}
};

/// A parameter is out of its documented range (non-positive bandwidth, ...).
struct InvalidParam : Error {
    explicit InvalidParam(const std::string& msg) : Error(msg) {}
};

/// Malformed input file. Carries the 1-based line number when known.
struct ParseError : Error {
    ParseError(const std::string& path, long line, const std::string& reason)
        : Error(path + ":" + std::to_string(line) + ": " + reason), line_number(line) {}
    long line_number;
};

/// Filesystem-level failure (missing file, unwritable destination).
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

/// A parallel worker failed; the whole run is aborted, no partial results.
struct WorkerFailure : Error {
    explicit WorkerFailure(const std::string& msg) : Error(msg) {}
};

/// Numerical failure that invalidates a whole run (e.g. no point could be
/// projected, or a timed run produced output differing from the reference).
struct NumericalFailure : Error {
    explicit NumericalFailure(const std::string& msg) : Error(msg) {}
};

} // namespace pcs
