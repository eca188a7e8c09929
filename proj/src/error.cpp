#include "eddikit/error.hpp"

namespace eddikit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::NoCrossings: return "NoCrossings";
    case ErrorKind::InsufficientCrossings: return "InsufficientCrossings";
    case ErrorKind::CutoffOutOfRange: return "CutoffOutOfRange";
    case ErrorKind::EmptyLibrary: return "EmptyLibrary";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::MissingAcceleration: return "MissingAcceleration";
    case ErrorKind::AllTermsEliminated: return "AllTermsEliminated";
    case ErrorKind::FrequencyOutOfRange: return "FrequencyOutOfRange";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

ErrorCategory category_of(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return ErrorCategory::Config;
    case ErrorKind::Io: return ErrorCategory::Io;
    case ErrorKind::InvalidArgument: return ErrorCategory::Usage;
    default: return ErrorCategory::Numerical;
  }
}

}  // namespace eddikit
