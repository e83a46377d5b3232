#pragma once

#include <stdexcept>
#include <string>

namespace hsot {

/// Caller violated a precondition (bad argument, mismatched dimensions, ...).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Geodesic interpolation between antipodal endpoints has no unique answer.
struct AmbiguityError : UsageError {
    using UsageError::UsageError;
};

/// Operation is only implemented for specific sphere dimensions.
struct UnsupportedDimensionError : UsageError {
    using UsageError::UsageError;
};

/// A computation left the representable or convergent regime.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Conditional mass of a coupling row is zero or antipodally balanced.
struct DegenerateBarycenterError : NumericalError {
    using NumericalError::NumericalError;
};

/// Malformed or out-of-contract experiment configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hsot
