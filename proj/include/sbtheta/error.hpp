#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sbtheta {

enum class ErrorCode {
  // curve_core
  OddCount,
  ZeroBranchPoint,
  DuplicateBranchPoint,
  AtBranchPoint,
  // contour_engine
  IntersectingCuts,
  TooCloseToBranchPoint,
  PoleOnPath,
  ToleranceNotReached,
  // period_theta
  SingularC,
  NonconvergentTau,
  // abelian_calculus
  SingularNormalizationSystem,
  ExtrapolationDivergence,
  GenusTooSmall,
  // sb_hierarchy
  WindowTooSmall,
  DegenerateLeadingCoefficient,
  RootAtBranchPointCollision,
  // solution_engine
  SpecialDivisor,
  SelfCheckFailed,
  ZeroAlpha0,
  ThetaNearZero,
  PoleOfPhi,
  EqualBranchPoints,
  // verification
  IllConditionedInterpolation,
  // cli_io
  ConfigError,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Module name owning an error code ("curve_core", "contour_engine", ...).
std::string_view module_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sbtheta
