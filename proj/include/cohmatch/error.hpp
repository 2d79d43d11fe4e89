#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cohmatch {

enum class ErrorKind {
  InvalidArgument,
  InvalidSimplex,
  MissingFace,
  DuplicateSimplex,
  EmptyComplex,
  ParseError,
  InvalidWindow,
  DegreeMismatch,
  LimitExceeded,
  StepUnderflow,
  StartPointNotInDiagram,
  RegionUnbounded,
  EmptyRegion,
  BasepointSingular,
  EssentialCountMismatch,
};

std::string_view to_string(ErrorKind kind);

/// Library exception; `kind()` is the machine-readable category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cohmatch
