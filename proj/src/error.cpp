#include "gnplab/error.hpp"

namespace gnp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidBody: return "InvalidBody";
    case ErrorCode::VertexSingularity: return "VertexSingularity";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::UnknownGallery: return "UnknownGallery";
    case ErrorCode::NonPositiveParam: return "NonPositiveParam";
    case ErrorCode::DegenerateDomain: return "DegenerateDomain";
    case ErrorCode::EmptyBoundary: return "EmptyBoundary";
    case ErrorCode::NotStarPolar: return "NotStarPolar";
    case ErrorCode::NotGraph: return "NotGraph";
    case ErrorCode::PatchOverlap: return "PatchOverlap";
    case ErrorCode::BoundaryNotCovered: return "BoundaryNotCovered";
    case ErrorCode::SingularMap: return "SingularMap";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::RayNeverExits: return "RayNeverExits";
    case ErrorCode::GNPViolated: return "GNPViolated";
    case ErrorCode::InfeasibleBC: return "InfeasibleBC";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::SingularPair: return "SingularPair";
    case ErrorCode::SupportOutsideBall: return "SupportOutsideBall";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace gnp
