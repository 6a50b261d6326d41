#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rcwb {

enum class ErrorCode {
  InvalidArgument,
  OverlappingBott,
  DimensionMismatch,
  BadBlock,
  StageMismatch,
  NotTwoSummand,
  NotUnital,
  TooLarge,
  Divergent,
  RhoTooLarge,
  BadRange,
  NotPSD,
  DimMismatch,
  RankDeficit,
  NotInvariant,
  NotHereditary,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OverlappingBott: return "OverlappingBott";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadBlock: return "BadBlock";
    case ErrorCode::StageMismatch: return "StageMismatch";
    case ErrorCode::NotTwoSummand: return "NotTwoSummand";
    case ErrorCode::NotUnital: return "NotUnital";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Divergent: return "Divergent";
    case ErrorCode::RhoTooLarge: return "RhoTooLarge";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::RankDeficit: return "RankDeficit";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::NotHereditary: return "NotHereditary";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rcwb
