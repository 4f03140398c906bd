#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace motorclass {

/// Machine-readable failure codes. Each maps onto one CLI exit status.
enum class ErrorCode {
  InvalidArgument,
  EmptyDataset,
  MissingFile,
  BadManifest,
  BadChannels,
  BadChannelCount,
  BadSampleCount,
  BadSampleRate,
  NonFinite,
  UnknownLabel,
  ParseError,
  MissingLabel,
  UnequalCounts,
  SingleClass,
  TooFewRows,
  WidthMismatch,
  NumericFailure,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// 1 usage, 2 data error, 3 numeric failure.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::optional<int> trial_id = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<int> trial_id() const noexcept { return trial_id_; }

 private:
  ErrorCode code_;
  std::optional<int> trial_id_;
};

}  // namespace motorclass
