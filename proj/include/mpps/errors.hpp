#pragma once

#include <stdexcept>
#include <string>

namespace mpps {

/// Bad caller input: malformed flags, unknown names, empty lattice, m < 1.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operand shapes do not conform.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical precondition failed, e.g. k*u >= 1 in gamma_k.
class BoundInvalid : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// File or format problems while reading/writing matrices and series.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mpps
