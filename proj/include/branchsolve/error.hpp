#pragma once

#include <stdexcept>
#include <string>

namespace branchsolve {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched sheet counts, codomain dimensions or grids.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Grid resolution incompatible with the requested symmetry or map.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Problem parameters violate a structural requirement (gcd(k,q) != 1, ...).
class InvalidProblem : public Error {
 public:
  using Error::Error;
};

/// Input data rejected because an invariant (symmetry, equivariance) fails.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class DegenerateField : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace branchsolve
