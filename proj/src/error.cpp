#include "torsionshape/error.hpp"

namespace tshape {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadDegree: return "BadDegree";
    case ErrorCode::NonPositiveProfile: return "NonPositiveProfile";
    case ErrorCode::BadProfile: return "BadProfile";
    case ErrorCode::BadLevel: return "BadLevel";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::OutOfBox: return "OutOfBox";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::DegenerateBoundary: return "DegenerateBoundary";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::StencilStarved: return "StencilStarved";
    case ErrorCode::BadScale: return "BadScale";
    case ErrorCode::AlphaOne: return "AlphaOne";
    case ErrorCode::EpsTooLarge: return "EpsTooLarge";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::DegenerateWeight: return "DegenerateWeight";
    case ErrorCode::BadMultiplier: return "BadMultiplier";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace tshape
