#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace defistress {

enum class ErrorCode {
  Parse,
  EmptySeries,
  NonMonotonicTime,
  InsufficientData,
  DegenerateSample,
  InvalidParams,
  MissingPrice,
  HorizonMismatch,
  InsufficientDepth,
  InsufficientPoolLiquidity,
  InvalidRange,
  Io,
  Schema,
  Numeric,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the core carries one of the codes above; the C layer
// maps them onto status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  // row is 1-based over data rows (the header is row 0).
  ParseError(std::size_t row, const std::string& what)
      : Error(ErrorCode::Parse, "row " + std::to_string(row) + ": " + what),
        row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class InsufficientDepthError : public Error {
 public:
  InsufficientDepthError(double requested, double max_fillable)
      : Error(ErrorCode::InsufficientDepth,
              "insufficient depth: requested " + std::to_string(requested) +
                  ", max fillable " + std::to_string(max_fillable)),
        max_fillable_(max_fillable) {}

  double max_fillable() const noexcept { return max_fillable_; }

 private:
  double max_fillable_;
};

}  // namespace defistress
