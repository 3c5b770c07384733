#pragma once

#include <stdexcept>
#include <string>

namespace relstab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or field mismatch between operands, or a dimension over the cap.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid group input: bad permutations, closure over the order cap, a set
// that is not a subgroup.
class GroupError : public Error {
 public:
  using Error::Error;
};

// Module validation failure (non-invertible generator, relation violation,
// a matrix that is not an intertwiner).
class ModuleError : public Error {
 public:
  using Error::Error;
};

// The stable layer only handles p-groups in characteristic p.
class NotPGroupError : public Error {
 public:
  NotPGroupError() : Error("stable layer requires p-group") {}
};

// Indecomposability could not be certified within the trial budget.
class CertificationError : public Error {
 public:
  using Error::Error;
};

// An internal identity that must hold exactly did not (signals a bug).
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace relstab
