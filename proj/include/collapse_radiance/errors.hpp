#pragma once

// Exception hierarchy shared by the whole library. Every throw site uses one
// of these so callers can distinguish bad arguments, bad input documents and
// numerical failures without string matching.

#include <stdexcept>
#include <string>

namespace collapse_radiance {

//! Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! A numeric or structural precondition on an argument was violated.
struct DomainError : Error {
  using Error::Error;
};

//! An input document (atom JSON, spectrum CSV, sidecar JSON) is malformed.
struct ParseError : Error {
  using Error::Error;
};

//! Electron bookkeeping contradicts the declared nuclear charge.
struct OccupancyError : Error {
  using Error::Error;
};

//! Adaptive quadrature stopped before reaching the requested tolerance.
struct QuadratureError : Error {
  QuadratureError(const std::string& msg, double achieved_rel_error)
      : Error(msg + " (achieved relative error " +
              std::to_string(achieved_rel_error) + ")"),
        achieved(achieved_rel_error) {}
  double achieved;  //!< best relative error estimate reached before giving up
};

}  // namespace collapse_radiance
