#pragma once

#include <stdexcept>
#include <string>

namespace qmaforge {

// Base class for every error raised by the library. Subclasses name the
// contract that was violated so callers (and the CLI) can map them.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense matrix would exceed the amplitude budget.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// Unknown register name, duplicate names, layout mismatch, bad permutation.
class LayoutError : public Error {
 public:
  using Error::Error;
};

// Input violates a numeric contract (non-Hermitian, non-unitary, non-finite).
class ContractError : public Error {
 public:
  using Error::Error;
};

class NotPsdError : public ContractError {
 public:
  using ContractError::ContractError;
};

// Invalid bipartition for Schmidt-type operations.
class CutError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Proof tuple does not match the verifier's proof registers.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

// Wrong number of proofs, slots, or POVM elements.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A bound-arithmetic hypothesis (gap, delta > 10 epsilon) does not hold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized input.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmaforge
