#include "relcurr/errors.hpp"

namespace relcurr {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::DataIntegrity: return "data-integrity";
    case ErrorKind::NumericDomain: return "numeric-domain";
    case ErrorKind::EmptyClass: return "empty-class";
    case ErrorKind::TrainingDiverged: return "training-diverged";
    case ErrorKind::AnnotationUnavailable: return "annotation-unavailable";
    case ErrorKind::Protocol: return "protocol";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::string payload)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      payload_(std::move(payload)) {}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig: return 2;
    case ErrorKind::DataIntegrity: return 3;
    case ErrorKind::TrainingDiverged: return 4;
    case ErrorKind::AnnotationUnavailable: return 5;
    default: return 1;
  }
}

}  // namespace relcurr
