#pragma once

#include <stdexcept>
#include <string>

namespace sobolev {

/// Geometry or data outside an operation's domain of validity
/// (ball exits the grid, empty region, infeasible step size).
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unknown corpus id or enum value.
struct lookup_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iteration or quadrature failed to converge.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grid too coarse to resolve a kernel or schedule.
struct resolution_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A study configuration failed validation.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sobolev
