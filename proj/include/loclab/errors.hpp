#pragma once

#include <stdexcept>
#include <string>

namespace loclab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument or configuration value (range/type violations).
struct InvalidParameter : Error {
  using Error::Error;
};

// Requested problem size exceeds the configured matrix cap.
struct ResourceLimit : Error {
  using Error::Error;
};

// Resolvent requested at an energy too close to the spectrum.
struct NearEigenvalue : Error {
  using Error::Error;
};

// Eigensolver or linear solver failed to meet its tolerance.
struct SolverError : Error {
  using Error::Error;
};

// Decay fit has too few usable points after window shrinking.
struct FitInfeasible : Error {
  using Error::Error;
};

}  // namespace loclab
