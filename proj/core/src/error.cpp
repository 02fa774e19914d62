#include "bdeconv/error.hpp"

namespace bdeconv {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::EmptyOverlap: return "EMPTY_OVERLAP";
    case ErrorCode::SeriesTooShort: return "SERIES_TOO_SHORT";
    case ErrorCode::AllStartsFailed: return "ALL_STARTS_FAILED";
    case ErrorCode::ZeroFilter: return "ZERO_FILTER";
    case ErrorCode::DegenerateLeadingCoeff: return "DEGENERATE_LEADING_COEFF";
    case ErrorCode::SingularVandermonde: return "SINGULAR_VANDERMONDE";
    case ErrorCode::SingularHessian: return "SINGULAR_HESSIAN";
    case ErrorCode::Io: return "IO";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace bdeconv
