#include "optpursuit/error.hpp"

namespace optpursuit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::NearSingularBorder: return "NearSingularBorder";
    case ErrorCode::DegeneratePivot: return "DegeneratePivot";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroColumn: return "ZeroColumn";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::NoSelectableCandidate: return "NoSelectableCandidate";
    case ErrorCode::SpanExhausted: return "SpanExhausted";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InfeasibleBlocks: return "InfeasibleBlocks";
    case ErrorCode::ZeroSignal: return "ZeroSignal";
    case ErrorCode::ZeroTruth: return "ZeroTruth";
    case ErrorCode::ConstantTarget: return "ConstantTarget";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace optpursuit
