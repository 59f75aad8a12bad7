// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace warplab {

enum class ErrorCode {
  InvalidArgument,
  DomainError,
  NonPositiveWarp,
  HorizonError,
  NonConvergence,
  TangencyError,
  DegenerateTestFunction,
  NonpositiveMeanCurvature,
  MissingSpectrum,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries a code so the C layer can map
/// it onto a stable status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failures keep the 1-based position of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(ErrorCode::ParseError, what + " (line " + std::to_string(line) +
                                         ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace warplab
