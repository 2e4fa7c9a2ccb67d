#pragma once

#include <stdexcept>
#include <string>

namespace curvint {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad argument, guard violation, or a point that fails model membership.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Geometrically degenerate input: antipodal pairs, rank-deficient frames,
// ill-conditioned metrics, non-Killing generators.
class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

}  // namespace curvint
