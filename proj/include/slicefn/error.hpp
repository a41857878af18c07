#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slicefn {

enum class ErrorCode {
  AlgebraMismatch,
  ModeMismatch,
  ZeroNotInvertible,
  InexactSquareRoot,
  NotImaginaryUnit,
  OutOfDomain,
  PoleProximity,
  RealPointDerivative,
  EmptyDomainIntersection,
  GridTooSmall,
  OutOfAnnulus,
  CaseMismatch,
  PhiUndefined,
  NormalIdenticallyZero,
  SphericalDerivativeVanishes,
  DegenerateEpsilon,
  ContourThroughSingularity,
  NonConvergentWindow,
  ProbeInconclusive,
  ParseError,
  AmbiguousConstantProduct,
  InvalidArgument,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::ZeroNotInvertible: return "ZeroNotInvertible";
    case ErrorCode::InexactSquareRoot: return "InexactSquareRoot";
    case ErrorCode::NotImaginaryUnit: return "NotImaginaryUnit";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::RealPointDerivative: return "RealPointDerivative";
    case ErrorCode::EmptyDomainIntersection: return "EmptyDomainIntersection";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::OutOfAnnulus: return "OutOfAnnulus";
    case ErrorCode::CaseMismatch: return "CaseMismatch";
    case ErrorCode::PhiUndefined: return "PhiUndefined";
    case ErrorCode::NormalIdenticallyZero: return "NormalIdenticallyZero";
    case ErrorCode::SphericalDerivativeVanishes: return "SphericalDerivativeVanishes";
    case ErrorCode::DegenerateEpsilon: return "DegenerateEpsilon";
    case ErrorCode::ContourThroughSingularity: return "ContourThroughSingularity";
    case ErrorCode::NonConvergentWindow: return "NonConvergentWindow";
    case ErrorCode::ProbeInconclusive: return "ProbeInconclusive";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AmbiguousConstantProduct: return "AmbiguousConstantProduct";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// that front ends can map it to an exit status without string matching.
class SliceError : public std::runtime_error {
 public:
  SliceError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failures also record the byte offset into the source text.
class ParseFailure : public SliceError {
 public:
  ParseFailure(ErrorCode code, std::size_t position, const std::string& message)
      : SliceError(code, message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace slicefn
