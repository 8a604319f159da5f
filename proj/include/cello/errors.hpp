#pragma once

#include <stdexcept>
#include <string>

namespace cello {

enum class ErrorKind {
  MalformedDocument,
  DanglingReference,
  UnknownEntity,
  CyclicGraph,
  UnknownTarget,
  IncompatibleTask,
  TooLarge,
  LeakageViolation,
  NoSustainingEdge,
  IoFailure,
  SchemaViolation,
  InsufficientRecords,
  InsufficientModels,
  EmptyInput,
  SampleTooLarge,
  ClientUnavailable,
  ConfigError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::MalformedDocument: return "MalformedDocument";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::UnknownEntity: return "UnknownEntity";
    case ErrorKind::CyclicGraph: return "CyclicGraph";
    case ErrorKind::UnknownTarget: return "UnknownTarget";
    case ErrorKind::IncompatibleTask: return "IncompatibleTask";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::LeakageViolation: return "LeakageViolation";
    case ErrorKind::NoSustainingEdge: return "NoSustainingEdge";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::InsufficientRecords: return "InsufficientRecords";
    case ErrorKind::InsufficientModels: return "InsufficientModels";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::SampleTooLarge: return "SampleTooLarge";
    case ErrorKind::ClientUnavailable: return "ClientUnavailable";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

/// Exception carrying a machine-checkable kind plus a human message
/// (the message includes the offending path or line where one exists).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace cello
