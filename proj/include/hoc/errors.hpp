// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hoc {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector/tensor lengths that do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Exhaustive computation refused because it would be too large.
class CostGuardError : public Error {
 public:
  using Error::Error;
};

// Every level coefficient is zero, so no tail bound exists for t > 0.
class DegenerateLevelsError : public Error {
 public:
  using Error::Error;
};

// Interdependence matrix has operator norm >= 1.
class DobrushinError : public Error {
 public:
  using Error::Error;
};

// Malformed or invalid run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hoc
