#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pptdist {

enum class ErrorCode {
  NonHermitian,
  NoConvergence,
  DimensionMismatch,
  BadIndex,
  BadDimension,
  OneSidedSpace,
  NotNormalized,
  NotOrthogonal,
  TooLarge,
  IllPosed,
  BadChannelKind,
  NotEntangled,
  PreconditionViolated,
  NotAPovm,
  BadEffect,
  SumMismatch,
  BadRange,
  BadEnsemble,
  NonMonotone,
  BadIndexing,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::OneSidedSpace: return "OneSidedSpace";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::IllPosed: return "IllPosed";
    case ErrorCode::BadChannelKind: return "BadChannelKind";
    case ErrorCode::NotEntangled: return "NotEntangled";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotAPovm: return "NotAPovm";
    case ErrorCode::BadEffect: return "BadEffect";
    case ErrorCode::SumMismatch: return "SumMismatch";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::BadEnsemble: return "BadEnsemble";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::BadIndexing: return "BadIndexing";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace pptdist
