#include "cohmatch/error.hpp"

namespace cohmatch {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidSimplex: return "InvalidSimplex";
    case ErrorKind::MissingFace: return "MissingFace";
    case ErrorKind::DuplicateSimplex: return "DuplicateSimplex";
    case ErrorKind::EmptyComplex: return "EmptyComplex";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidWindow: return "InvalidWindow";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::LimitExceeded: return "LimitExceeded";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::StartPointNotInDiagram: return "StartPointNotInDiagram";
    case ErrorKind::RegionUnbounded: return "RegionUnbounded";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::BasepointSingular: return "BasepointSingular";
    case ErrorKind::EssentialCountMismatch: return "EssentialCountMismatch";
  }
  return "Unknown";
}

}  // namespace cohmatch
