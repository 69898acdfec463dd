#pragma once

#include <stdexcept>
#include <string>

namespace bdlab {

// Error taxonomy shared across the library. Every condition the library
// rejects maps onto one of these; nothing else is thrown on the happy path.

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Duplicate values under the strict-reject tie policy.
struct TieError : Error {
    using Error::Error;
};

// Map violates its group condition (a1*a2 = 0, non-monotone breakpoints).
struct GroupError : Error {
    using Error::Error;
};

// Index out of range or repeated where distinct indices are required.
struct IndexError : Error {
    using Error::Error;
};

// Functional not definable on the input (zero variance, all pairs tied, ...).
struct DegenerateError : Error {
    using Error::Error;
};

// Parameter-metric argument sits on a pole.
struct PoleError : Error {
    using Error::Error;
};

// Structurally invalid input (bad weights, missing embedding, bad header, ...).
struct ValidationError : Error {
    using Error::Error;
};

// Unknown experiment name or malformed experiment parameters.
struct SpecError : Error {
    using Error::Error;
};

// 2x2 covariance has equal eigenvalues; no principal direction exists.
struct EqualEigenvalueError : Error {
    using Error::Error;
};

} // namespace bdlab
