#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bdeconv {

enum class ErrorCode {
  InvalidArgument,
  EmptyOverlap,
  SeriesTooShort,
  AllStartsFailed,
  ZeroFilter,
  DegenerateLeadingCoeff,
  SingularVandermonde,
  SingularHessian,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying one of the library's error codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bdeconv
