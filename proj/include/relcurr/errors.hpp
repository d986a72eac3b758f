#pragma once

#include <stdexcept>
#include <string>

namespace relcurr {

enum class ErrorKind {
  InvalidInput,
  InvalidConfig,
  DataIntegrity,
  NumericDomain,
  EmptyClass,
  TrainingDiverged,
  AnnotationUnavailable,
  Protocol,
  Io,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the toolkit. The kind decides the CLI exit code;
/// `payload` carries raw remote responses for protocol errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string payload = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& payload() const noexcept { return payload_; }

 private:
  ErrorKind kind_;
  std::string payload_;
};

/// Process exit code for an error kind: 2 config, 3 data integrity,
/// 4 training diverged, 5 annotation transport, 1 anything else.
int exit_code(ErrorKind kind);

}  // namespace relcurr
