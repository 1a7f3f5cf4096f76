// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sqdrift {

/// Error classes map onto CLI exit codes (parse=2, scale=3, convergence=4, io=5).
enum class ErrorClass { parse, data, argument, scale, convergence, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

  int exit_code() const noexcept {
    switch (cls_) {
      case ErrorClass::scale:
        return 3;
      case ErrorClass::convergence:
        return 4;
      case ErrorClass::io:
        return 5;
      default:
        return 2;  // parse, data and argument errors are all caller-input errors
    }
  }

 private:
  ErrorClass cls_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(ErrorClass::parse, what) {}
};
struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorClass::data, what) {}
};
struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what) : Error(ErrorClass::argument, what) {}
};
struct ScaleError : Error {
  explicit ScaleError(const std::string& what) : Error(ErrorClass::scale, what) {}
};
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, std::vector<double> residuals = {})
      : Error(ErrorClass::convergence, what), best_residuals(std::move(residuals)) {}
  std::vector<double> best_residuals;
};
struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorClass::io, what) {}
};

}  // namespace sqdrift
