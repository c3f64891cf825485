#pragma once

#include <stdexcept>
#include <string>

namespace garchfis {

/// Failure categories carried by every Error. Data-shaped problems and
/// numerical problems map to different process exit codes in the CLI.
enum class Errc {
  // data / input
  kEmptyInput,
  kEmptyOrSingleton,
  kNonPositivePrice,
  kNonFiniteValue,
  kZeroVariance,
  kWindowTooShort,
  kSeriesTooShort,
  kTestPartitionTooShort,
  kLengthMismatch,
  kZeroActual,
  kConstantActual,
  kEmptyWindow,
  kEmptyRuleBase,
  kParseError,
  kEmptyFile,
  kIo,
  kUsage,
  // numeric
  kInvalidParams,
  kNonPositiveInitialVariance,
  kInsufficientData,
  kOptimizationFailure,
  kNonPositiveMean,
  kNonPositiveWidth,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

/// true for error codes caused by numerical procedures (MLE, optimizer)
/// rather than by malformed or insufficient input data.
inline bool is_numeric_error(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidParams:
    case Errc::kNonPositiveInitialVariance:
    case Errc::kOptimizationFailure:
    case Errc::kNonPositiveMean:
    case Errc::kNonPositiveWidth:
      return true;
    default:
      return false;
  }
}

}  // namespace garchfis
