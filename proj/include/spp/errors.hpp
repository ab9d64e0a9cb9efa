#pragma once

#include <stdexcept>
#include <string>

namespace spp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A network or scenario violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A dense linear solve failed (I - A W is numerically singular).
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Simple-cycle enumeration exceeded its configured cap.
class CycleBudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Star closed forms were requested for a non-star network.
class NotStar : public Error {
 public:
  using Error::Error;
};

/// The network has the right topology but violates an extra structural
/// precondition (e.g. C_1j > 0 for a partially stubborn leaf j).
class InvalidStructure : public Error {
 public:
  using Error::Error;
};

/// A condition was evaluated on a network with the wrong structure.
class WrongTopology : public Error {
 public:
  using Error::Error;
};

/// No multistart run converged.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// An agent tried to read data outside its local view.
class ViewViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace spp
