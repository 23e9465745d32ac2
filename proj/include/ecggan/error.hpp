#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecggan {

enum class ErrorCode {
  WindowOutOfRange,
  RateExcluded,
  EmptyDataset,
  InvalidBeat,
  InvalidTemplate,
  UnsupportedLayer,
  ShapeMismatch,
  InvalidProbability,
  NotRecorded,
  EmptyTrainingSet,
  EmptySet,
  FeatureUndetectable,
  ZeroReference,
  LengthMismatch,
  DivisionByZero,
  InvalidArgument,
  Io,
  Config,
  Format,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can dispatch on the kind instead of the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorCode::RateExcluded: return "RateExcluded";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InvalidBeat: return "InvalidBeat";
    case ErrorCode::InvalidTemplate: return "InvalidTemplate";
    case ErrorCode::UnsupportedLayer: return "UnsupportedLayer";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::NotRecorded: return "NotRecorded";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::FeatureUndetectable: return "FeatureUndetectable";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Format: return "Format";
  }
  return "Unknown";
}

}  // namespace ecggan
