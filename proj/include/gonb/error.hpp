#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gonb {

enum class ErrorKind {
  InvalidArgument,
  UnboundedPolytope,
  EmptyPolytope,
  DegeneratePolytope,
  FacetNotInPolytope,
  SymmetricInput,
  DegenerateSimplex,
  DegenerateFacet,
  FrameMismatch,
  ParallelDirection,
  ConeTooWide,
  ZeroVolumeWindow,
  TooFewPoints,
  DuplicatePoint,
  MarginVanished,
  ScanFailure,
  CertificateMismatch,
  ParseError,
  RegionFrameMissing,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnboundedPolytope: return "UnboundedPolytope";
    case ErrorKind::EmptyPolytope: return "EmptyPolytope";
    case ErrorKind::DegeneratePolytope: return "DegeneratePolytope";
    case ErrorKind::FacetNotInPolytope: return "FacetNotInPolytope";
    case ErrorKind::SymmetricInput: return "SymmetricInput";
    case ErrorKind::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorKind::DegenerateFacet: return "DegenerateFacet";
    case ErrorKind::FrameMismatch: return "FrameMismatch";
    case ErrorKind::ParallelDirection: return "ParallelDirection";
    case ErrorKind::ConeTooWide: return "ConeTooWide";
    case ErrorKind::ZeroVolumeWindow: return "ZeroVolumeWindow";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::DuplicatePoint: return "DuplicatePoint";
    case ErrorKind::MarginVanished: return "MarginVanished";
    case ErrorKind::ScanFailure: return "ScanFailure";
    case ErrorKind::CertificateMismatch: return "CertificateMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RegionFrameMissing: return "RegionFrameMissing";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable kind. what() is "<Kind>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace gonb
