// Copyright 2026 the wdro authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WDRO_CORE_ERROR_HPP
#define WDRO_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wdro {

enum class ErrorCode {
  EmptyAtoms,
  NegativeWeight,
  WeightSumMismatch,
  DimensionMismatch,
  VariantMismatch,
  ZeroVector,
  DomainError,
  UnsupportedPairing,
  WitnessNotFound,
  EpsilonOutOfRange,
  AlphaOutOfRange,
  GridMissingAtoms,
  NoFiniteCostColumn,
  NoFiniteCostProbe,
  InfeasibleTransport,
  NoPerPointCertificate,
  NonConvexFamily,
  DivergenceDetected,
  InvalidCoupling,
  ConfigParse,
  Io,
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyAtoms: return "EmptyAtoms";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::WeightSumMismatch: return "WeightSumMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::VariantMismatch: return "VariantMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnsupportedPairing: return "UnsupportedPairing";
    case ErrorCode::WitnessNotFound: return "WitnessNotFound";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::GridMissingAtoms: return "GridMissingAtoms";
    case ErrorCode::NoFiniteCostColumn: return "NoFiniteCostColumn";
    case ErrorCode::NoFiniteCostProbe: return "NoFiniteCostProbe";
    case ErrorCode::InfeasibleTransport: return "InfeasibleTransport";
    case ErrorCode::NoPerPointCertificate: return "NoPerPointCertificate";
    case ErrorCode::NonConvexFamily: return "NonConvexFamily";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::InvalidCoupling: return "InvalidCoupling";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace wdro

#endif
