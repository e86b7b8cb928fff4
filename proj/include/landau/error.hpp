#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace landau {

enum class ErrorCode {
  OddModeCount,
  EmptyInterval,
  BoxNotGridAligned,
  BoxNotInsideDomain,
  InvalidArgument,
  ImaginaryResidueExceeded,
  SingularPoint,
  MissingBoxForSingularKernel,
  TableMismatch,
  ApproachKernelMismatch,
  BlowUp,
  UnsupportedProblem,
  NoReferenceAvailable,
  VersionMismatch,
  IoError,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::OddModeCount: return "OddModeCount";
    case ErrorCode::EmptyInterval: return "EmptyInterval";
    case ErrorCode::BoxNotGridAligned: return "BoxNotGridAligned";
    case ErrorCode::BoxNotInsideDomain: return "BoxNotInsideDomain";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ImaginaryResidueExceeded: return "ImaginaryResidueExceeded";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::MissingBoxForSingularKernel: return "MissingBoxForSingularKernel";
    case ErrorCode::TableMismatch: return "TableMismatch";
    case ErrorCode::ApproachKernelMismatch: return "ApproachKernelMismatch";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::UnsupportedProblem: return "UnsupportedProblem";
    case ErrorCode::NoReferenceAvailable: return "NoReferenceAvailable";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// numerical failures map to exit code 3 in the cli, everything else to 2
inline bool is_numerical(ErrorCode c) {
  return c == ErrorCode::ImaginaryResidueExceeded || c == ErrorCode::BlowUp;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::int64_t index = -1)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  // step index for BlowUp, -1 otherwise
  std::int64_t index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::int64_t index_;
};

}  // namespace landau
