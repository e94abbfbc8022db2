#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gnp {

enum class ErrorCode {
  InvalidBody,
  VertexSingularity,
  NotOnBoundary,
  UnknownGallery,
  NonPositiveParam,
  DegenerateDomain,
  EmptyBoundary,
  NotStarPolar,
  NotGraph,
  PatchOverlap,
  BoundaryNotCovered,
  SingularMap,
  EmptySet,
  ResolutionTooCoarse,
  PreconditionFailed,
  RayNeverExits,
  GNPViolated,
  InfeasibleBC,
  SingularPoint,
  SingularPair,
  SupportOutsideBall,
  InvalidInput,
};

std::string_view to_string(ErrorCode code);

/// Every precondition failure surfaces as this exception; `code()` names the
/// failure so callers (and the CLI) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gnp
