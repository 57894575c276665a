#pragma once

#include <stdexcept>
#include <string>

namespace remest {

/// Base class for numerical failures. Bad arguments are reported with
/// std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested system exceeds the configured dimension cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// I - beta*B is (numerically) singular: the silent chain cannot escape.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// A performance measure is infinite (e.g. never transmitting an unstable source).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure hit its iteration or refinement cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A bisection bracket could not be established.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Internal consistency check failed (a proven monotonicity did not hold).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// The constrained problem is degenerate: zero distortion is already feasible.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference step is too small compared to the quadrature noise floor.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

/// The truncated dynamic program is silent at its own edge; enlarge the bound.
class BoundTooSmallError : public Error {
 public:
  using Error::Error;
};

}  // namespace remest
