#pragma once

#include <stdexcept>
#include <string>

namespace fieldsens {

/// A precondition on a physical input was violated (non-positive bandwidth,
/// zero range, loss below unity, ...). The CLI maps this to exit status 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two decibel quantities with incompatible references were combined.
class UnitMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Least-squares calibration with a rank-deficient design (all loads equal).
class SingularFitError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed document: missing column, unreadable file, bad header.
/// The CLI maps this to exit status 3.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fieldsens
