#pragma once

#include <stdexcept>
#include <string>

namespace tariff {

// Base of every error raised by the library. Each subclass corresponds to one
// failure mode so callers (the CLI in particular) can map them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Domain errors: the request is well-formed but has no answer.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Lookup errors: a referenced entity is missing or the input set is empty.
class LookupError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class CurrencyMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NegativeAmount : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DuplicateId : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class CapacityExceeded : public DomainError {
 public:
  using DomainError::DomainError;
};

class UndefinedUnitPrice : public DomainError {
 public:
  using DomainError::DomainError;
};

// The plan carries capacities only (fees were never published as text).
class UnpriceablePlan : public DomainError {
 public:
  using DomainError::DomainError;
};

class TooFewUsers : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoPaidTiers : public DomainError {
 public:
  using DomainError::DomainError;
};

class EmptySample : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateDesign : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoPlanCoversX : public LookupError {
 public:
  using LookupError::LookupError;
};

}  // namespace tariff
