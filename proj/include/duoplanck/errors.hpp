// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace duoplanck {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (dimension mismatch, bad argument).
class UsageError : public Error {
public:
  using Error::Error;
};

/// A configuration document was rejected. The message names the field.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Something went wrong while a simulation was running (I/O, divergence).
class RuntimeError : public Error {
public:
  using Error::Error;
};

} // namespace duoplanck
