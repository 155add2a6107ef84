#pragma once

#include <stdexcept>
#include <string>

namespace thermoknow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// The swap+QFT estimate-generation unitary needs a probe level per block member.
class ProbeTooSmall : public Error {
 public:
  using Error::Error;
};

class DenseCapExceeded : public Error {
 public:
  using Error::Error;
};

class InfeasiblePlan : public Error {
 public:
  using Error::Error;
};

class OrbitMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace thermoknow
