#pragma once

#include <stdexcept>
#include <string>

namespace wgopuc {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameters or malformed input (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

// A numerical guard tripped; results would be garbage (CLI exit code 3).
struct NumericGuardError : Error {
  using Error::Error;
};

// A denominator factor fell below tol_div. With |q| = 1 and irrational chi,
// |1 - q^n| can be arbitrarily small, so this is the chief hazard.
struct SmallDivisorError : NumericGuardError {
  using NumericGuardError::NumericGuardError;
};

// A constructor that must yield a monic polynomial produced a leading
// coefficient off 1 by more than tol_rel.
struct NotMonicError : NumericGuardError {
  using NumericGuardError::NumericGuardError;
};

// Toeplitz pivot below the singularity guard.
struct SingularToeplitzError : NumericGuardError {
  using NumericGuardError::NumericGuardError;
};

}  // namespace wgopuc
