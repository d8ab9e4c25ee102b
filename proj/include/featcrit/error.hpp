// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace featcrit {

enum class ErrorKind {
  NonScalarRoot,
  ShapeMismatch,
  NonDifferentiablePath,
  NonFiniteValue,
  VariantMismatch,
  LabelOutOfRange,
  MissingGradient,
  InvalidSplitSize,
  NonFiniteLoss,
  BadMagic,
  CountMismatch,
  TruncatedFile,
  InsufficientSamples,
  OverlappingLabelSpaces,
  BatchTooLarge,
  EmptyTrainSet,
  SingleClass,
  LengthMismatch,
  MissingBaseline,
  DegenerateCovariance,
  ConfigError,
  ModelShapeMismatch,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers and tests can branch on the cause rather than on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonScalarRoot: return "NonScalarRoot";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonDifferentiablePath: return "NonDifferentiablePath";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::VariantMismatch: return "VariantMismatch";
    case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorKind::MissingGradient: return "MissingGradient";
    case ErrorKind::InvalidSplitSize: return "InvalidSplitSize";
    case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::TruncatedFile: return "TruncatedFile";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::OverlappingLabelSpaces: return "OverlappingLabelSpaces";
    case ErrorKind::BatchTooLarge: return "BatchTooLarge";
    case ErrorKind::EmptyTrainSet: return "EmptyTrainSet";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::MissingBaseline: return "MissingBaseline";
    case ErrorKind::DegenerateCovariance: return "DegenerateCovariance";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ModelShapeMismatch: return "ModelShapeMismatch";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace featcrit
