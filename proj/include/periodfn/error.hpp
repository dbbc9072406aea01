#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace periodfn {

/// Failure categories raised by the library. Each maps onto one documented
/// error of a public operation.
enum class ErrorKind {
  DomainViolation,
  EnergyOutOfAnnulus,
  NoConjugate,
  QuadratureFailure,
  EventNotFound,
  DriftExceeded,
  NoCertifiedRegion,
  ResolutionTooCoarse,
  NonPositiveLinearPart,
  CaseMismatch,
  NoRootInAnnulus,
  NoBracket,
  ExtremumAtBoundary,
  UnknownExample,
  InvalidGeometry,
  NoSignChange,
  InvalidConfig,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::EnergyOutOfAnnulus: return "EnergyOutOfAnnulus";
    case ErrorKind::NoConjugate: return "NoConjugate";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::EventNotFound: return "EventNotFound";
    case ErrorKind::DriftExceeded: return "DriftExceeded";
    case ErrorKind::NoCertifiedRegion: return "NoCertifiedRegion";
    case ErrorKind::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorKind::NonPositiveLinearPart: return "NonPositiveLinearPart";
    case ErrorKind::CaseMismatch: return "CaseMismatch";
    case ErrorKind::NoRootInAnnulus: return "NoRootInAnnulus";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::ExtremumAtBoundary: return "ExtremumAtBoundary";
    case ErrorKind::UnknownExample: return "UnknownExample";
    case ErrorKind::InvalidGeometry: return "InvalidGeometry";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace periodfn
