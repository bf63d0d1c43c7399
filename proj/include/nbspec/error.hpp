// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace nbspec {

enum class ErrorKind {
  invalid_argument,  // bad parameters, malformed input files
  cap_exceeded,      // size limits of brute-force oracles
  numerical,         // solver non-convergence, underflow
  io,
};

/// Base exception for every failure raised by the library. The kind is
/// what the C API and the CLI translate into status / exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error invalid_argument(const std::string& what) {
  return Error(ErrorKind::invalid_argument, what);
}
inline Error cap_exceeded(const std::string& what) {
  return Error(ErrorKind::cap_exceeded, what);
}
inline Error numerical_error(const std::string& what) {
  return Error(ErrorKind::numerical, what);
}
inline Error io_error(const std::string& what) {
  return Error(ErrorKind::io, what);
}

}  // namespace nbspec
