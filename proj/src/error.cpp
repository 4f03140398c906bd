#include "motorclass/error.hpp"

namespace motorclass {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::BadManifest: return "BadManifest";
    case ErrorCode::BadChannels: return "BadChannels";
    case ErrorCode::BadChannelCount: return "BadChannelCount";
    case ErrorCode::BadSampleCount: return "BadSampleCount";
    case ErrorCode::BadSampleRate: return "BadSampleRate";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::UnequalCounts: return "UnequalCounts";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::NumericFailure: return "NumericFailure";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return 1;
    case ErrorCode::NumericFailure:
      return 3;
    default:
      return 2;
  }
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, std::optional<int> trial_id) {
  std::string out{to_string(code)};
  if (trial_id) out += " (trial " + std::to_string(*trial_id) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<int> trial_id)
    : std::runtime_error(decorate(code, message, trial_id)), code_(code), trial_id_(trial_id) {}

}  // namespace motorclass
