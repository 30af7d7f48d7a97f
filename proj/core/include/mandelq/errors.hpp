#pragma once

#include <stdexcept>

namespace mandelq {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A truncation is too small to represent the requested state or expectation
/// to the configured tolerance (tail weight or convergence recheck failed).
struct CutoffTooSmall : Error {
  using Error::Error;
};

/// An iterative construction (operator exponential, pad growth, root bracket)
/// failed to reach its target accuracy.
struct ConvergenceFailure : Error {
  using Error::Error;
};

/// Inverse temperature outside (0, inf).
struct InvalidTemperature : Error {
  using Error::Error;
};

/// Superposition weight outside [0, inf), or a weight/phase combination that
/// annihilates the state.
struct InvalidWeight : Error {
  using Error::Error;
};

/// Operands defined on incompatible truncations, or an index outside one.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// Total mean photon number at or below the intensity floor: Q is undefined.
struct ZeroIntensity : Error {
  using Error::Error;
};

/// Mode intensity <a(alpha)^dag a(alpha)> at or below the intensity floor;
/// only the covariant-denominator variant is affected.
struct ZeroModeIntensity : Error {
  using Error::Error;
};

/// An internal numerical invariant failed (certificate, probe bound, ...).
struct NumericalFailure : Error {
  using Error::Error;
};

/// Malformed input text (density-matrix files, parameter strings).
struct ParseError : Error {
  using Error::Error;
};

/// Structurally valid input violating a physical invariant (hermiticity,
/// unit trace, positivity, parameter domains).
struct ValidationError : Error {
  using Error::Error;
};

/// A requested closed-form cross-check disagreed with the reference value
/// beyond the configured tolerance.
struct ClosedFormMismatch : Error {
  using Error::Error;
};

}  // namespace mandelq
