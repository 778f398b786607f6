#pragma once

#include <stdexcept>
#include <string>

namespace centaur {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeMismatch : Error { using Error::Error; };
struct DimMismatch : Error { using Error::Error; };
struct MagnitudeOverflow : Error { using Error::Error; };
struct ShareIndexMismatch : Error { using Error::Error; };
struct TripleShapeMismatch : Error { using Error::Error; };
struct TripleExhausted : Error { using Error::Error; };
struct TransportFailure : Error { using Error::Error; };
struct TokenOutOfRange : Error { using Error::Error; };
struct ConfigMismatch : Error { using Error::Error; };
struct DegenerateVariance : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// Raised when a shared intermediate does not carry the permutation its
// call site expects (the machine-checked red/black dataflow).
struct PermLedgerViolation : Error { using Error::Error; };

}  // namespace centaur
