#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mafoliate {

enum class ErrorKind {
  InvalidInput,
  RealityViolation,
  NegativeExponent,
  NonPositiveRho,
  DegenerateLevi,
  ZeroDifferential,
  TypeCapExceeded,
  VanishingPhi,
  NoConvergence,
  AllRaysDegenerate,
  FlowEscape,
  IncompleteTrace,
  RankDeficientSamples,
  NonVanishingAtCenter,
  ComplexEigenvalues,
  NotHomogeneous,
  NotPositive,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the toolkit carries a kind so callers (and the
/// CLI exit-code policy) can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidInput: return "InvalidInput";
  case ErrorKind::RealityViolation: return "RealityViolation";
  case ErrorKind::NegativeExponent: return "NegativeExponent";
  case ErrorKind::NonPositiveRho: return "NonPositiveRho";
  case ErrorKind::DegenerateLevi: return "DegenerateLevi";
  case ErrorKind::ZeroDifferential: return "ZeroDifferential";
  case ErrorKind::TypeCapExceeded: return "TypeCapExceeded";
  case ErrorKind::VanishingPhi: return "VanishingPhi";
  case ErrorKind::NoConvergence: return "NoConvergence";
  case ErrorKind::AllRaysDegenerate: return "AllRaysDegenerate";
  case ErrorKind::FlowEscape: return "FlowEscape";
  case ErrorKind::IncompleteTrace: return "IncompleteTrace";
  case ErrorKind::RankDeficientSamples: return "RankDeficientSamples";
  case ErrorKind::NonVanishingAtCenter: return "NonVanishingAtCenter";
  case ErrorKind::ComplexEigenvalues: return "ComplexEigenvalues";
  case ErrorKind::NotHomogeneous: return "NotHomogeneous";
  case ErrorKind::NotPositive: return "NotPositive";
  }
  return "Unknown";
}

} // namespace mafoliate
