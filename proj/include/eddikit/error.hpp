#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eddikit {

enum class ErrorKind {
  InvalidArgument,
  StepSizeUnderflow,
  NonFiniteState,
  NoCrossings,
  InsufficientCrossings,
  CutoffOutOfRange,
  EmptyLibrary,
  NonFiniteInput,
  MissingAcceleration,
  AllTermsEliminated,
  FrequencyOutOfRange,
  Config,
  Io,
};

// Coarse grouping used by the CLI to pick an exit code.
enum class ErrorCategory { Usage, Config, Numerical, Io };

std::string_view to_string(ErrorKind kind) noexcept;
ErrorCategory category_of(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }
  // Message without the kind prefix.
  const std::string& message() const noexcept { return message_; }
  // Same kind, message prefixed with "context: ".
  Error with_context(std::string_view context) const {
    return Error(kind_, std::string(context) + ": " + message_);
  }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace eddikit
