#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tshape {

enum class ErrorCode {
  BadDegree,
  NonPositiveProfile,
  BadProfile,
  BadLevel,
  BadGrid,
  OutOfBox,
  EmptyDomain,
  DegenerateBoundary,
  GridMismatch,
  SolverDiverged,
  StencilStarved,
  BadScale,
  AlphaOne,
  EpsTooLarge,
  BadDimension,
  DegenerateWeight,
  BadMultiplier,
  BadParams,
  ConfigParse,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them to exit codes and JSON error records.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tshape
