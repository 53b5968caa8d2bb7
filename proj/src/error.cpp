#include "sbtheta/error.hpp"

namespace sbtheta {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OddCount: return "OddCount";
    case ErrorCode::ZeroBranchPoint: return "ZeroBranchPoint";
    case ErrorCode::DuplicateBranchPoint: return "DuplicateBranchPoint";
    case ErrorCode::AtBranchPoint: return "AtBranchPoint";
    case ErrorCode::IntersectingCuts: return "IntersectingCuts";
    case ErrorCode::TooCloseToBranchPoint: return "TooCloseToBranchPoint";
    case ErrorCode::PoleOnPath: return "PoleOnPath";
    case ErrorCode::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorCode::SingularC: return "SingularC";
    case ErrorCode::NonconvergentTau: return "NonconvergentTau";
    case ErrorCode::SingularNormalizationSystem: return "SingularNormalizationSystem";
    case ErrorCode::ExtrapolationDivergence: return "ExtrapolationDivergence";
    case ErrorCode::GenusTooSmall: return "GenusTooSmall";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::DegenerateLeadingCoefficient: return "DegenerateLeadingCoefficient";
    case ErrorCode::RootAtBranchPointCollision: return "RootAtBranchPointCollision";
    case ErrorCode::SpecialDivisor: return "SpecialDivisor";
    case ErrorCode::SelfCheckFailed: return "SelfCheckFailed";
    case ErrorCode::ZeroAlpha0: return "ZeroAlpha0";
    case ErrorCode::ThetaNearZero: return "ThetaNearZero";
    case ErrorCode::PoleOfPhi: return "PoleOfPhi";
    case ErrorCode::EqualBranchPoints: return "EqualBranchPoints";
    case ErrorCode::IllConditionedInterpolation: return "IllConditionedInterpolation";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string_view module_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OddCount:
    case ErrorCode::ZeroBranchPoint:
    case ErrorCode::DuplicateBranchPoint:
    case ErrorCode::AtBranchPoint:
      return "curve_core";
    case ErrorCode::IntersectingCuts:
    case ErrorCode::TooCloseToBranchPoint:
    case ErrorCode::PoleOnPath:
    case ErrorCode::ToleranceNotReached:
      return "contour_engine";
    case ErrorCode::SingularC:
    case ErrorCode::NonconvergentTau:
      return "period_theta";
    case ErrorCode::SingularNormalizationSystem:
    case ErrorCode::ExtrapolationDivergence:
    case ErrorCode::GenusTooSmall:
      return "abelian_calculus";
    case ErrorCode::WindowTooSmall:
    case ErrorCode::DegenerateLeadingCoefficient:
    case ErrorCode::RootAtBranchPointCollision:
      return "sb_hierarchy";
    case ErrorCode::SpecialDivisor:
    case ErrorCode::SelfCheckFailed:
    case ErrorCode::ZeroAlpha0:
    case ErrorCode::ThetaNearZero:
    case ErrorCode::PoleOfPhi:
    case ErrorCode::EqualBranchPoints:
      return "solution_engine";
    case ErrorCode::IllConditionedInterpolation:
      return "verification";
    case ErrorCode::ConfigError:
    case ErrorCode::ParseError:
      return "cli_io";
  }
  return "unknown";
}

}  // namespace sbtheta
