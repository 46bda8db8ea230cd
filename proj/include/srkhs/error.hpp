// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace srkhs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration, bad parameters or out-of-range indices.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Index outside the domain of a kernel or basis window.
class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Input matrix violates a structural precondition (asymmetry, non-PSD).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed or produced an inconsistent result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Allocation of a requested object is not possible.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace srkhs
