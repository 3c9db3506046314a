#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qorbit {

enum class ErrorKind {
  DivisionByZero,
  PoleAtPoint,
  UnboundSymbol,
  ResourceLimit,
  DimensionMismatch,
  IndexOutOfRange,
  SingularMatrix,
  NotYangBaxter,
  NotHecke,
  NotSkewInvertible,
  ParseError,
  InconclusiveDepth,
  BadDeformationParameter,
  DegenerateProfile,
  FactorizationMismatch,
  ShiftUnavailable,
  ChFailed,
  IdentityFailed,
  RecurrenceMismatch,
  ExceptionalProfile,
  ProjectorAxiomFailed,
  ConjectureFailed,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::PoleAtPoint: return "PoleAtPoint";
    case ErrorKind::UnboundSymbol: return "UnboundSymbol";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotYangBaxter: return "NotYangBaxter";
    case ErrorKind::NotHecke: return "NotHecke";
    case ErrorKind::NotSkewInvertible: return "NotSkewInvertible";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InconclusiveDepth: return "InconclusiveDepth";
    case ErrorKind::BadDeformationParameter: return "BadDeformationParameter";
    case ErrorKind::DegenerateProfile: return "DegenerateProfile";
    case ErrorKind::FactorizationMismatch: return "FactorizationMismatch";
    case ErrorKind::ShiftUnavailable: return "ShiftUnavailable";
    case ErrorKind::ChFailed: return "ChFailed";
    case ErrorKind::IdentityFailed: return "IdentityFailed";
    case ErrorKind::RecurrenceMismatch: return "RecurrenceMismatch";
    case ErrorKind::ExceptionalProfile: return "ExceptionalProfile";
    case ErrorKind::ProjectorAxiomFailed: return "ProjectorAxiomFailed";
    case ErrorKind::ConjectureFailed: return "ConjectureFailed";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qorbit
