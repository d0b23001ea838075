#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace optpursuit {

enum class ErrorCode {
  SingularGram,
  NearSingularBorder,
  DegeneratePivot,
  IndexOutOfRange,
  NonFiniteInput,
  DimensionMismatch,
  ZeroColumn,
  ZeroDenominator,
  NoSelectableCandidate,
  SpanExhausted,
  TooLarge,
  InfeasibleBlocks,
  ZeroSignal,
  ZeroTruth,
  ConstantTarget,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Numerical and precondition failures raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace optpursuit
