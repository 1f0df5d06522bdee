#pragma once

#include <stdexcept>
#include <string>

namespace qfock {

// Base class for all library errors so callers can catch the whole family.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent inputs (wrong sizes, mismatched contexts, ...).
struct ValidationError : Error {
  using Error::Error;
};

// Structurally valid input outside the supported range (level out of
// [0, N], empty norm window, truncation too small for a recursion depth).
struct RangeError : Error {
  using Error::Error;
};

// Brute-force permutation enumeration requested beyond the size cap.
struct OracleCapError : Error {
  using Error::Error;
};

// A matrix required to be positive definite has an eigenvalue at or below
// the spectral tolerance.
struct PositivityError : Error {
  using Error::Error;
};

// Polar decomposition degenerate: smallest singular value at or below the
// spectral tolerance, so the unitary factor is not trustworthy.
struct PolarDegeneracyError : Error {
  using Error::Error;
};

// Operator series evaluated outside its convergence domain.
struct SeriesDivergenceError : Error {
  using Error::Error;
};

// Configuration / command-line usage problems.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace qfock
