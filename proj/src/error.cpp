#include "gpl/error.hpp"

namespace gpl {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveConstant: return "NonPositiveConstant";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::InvalidKernel: return "InvalidKernel";
    case Errc::InvalidMode: return "InvalidMode";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::OverflowScale: return "OverflowScale";
    case Errc::HistoryGap: return "HistoryGap";
    case Errc::NonUniformGrid: return "NonUniformGrid";
    case Errc::CflViolation: return "CflViolation";
    case Errc::DivergentAmplitude: return "DivergentAmplitude";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::EmptyWindow: return "EmptyWindow";
    case Errc::NonPositiveEnergy: return "NonPositiveEnergy";
  }
  return "Unknown";
}

bool is_validation_error(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveConstant:
    case Errc::NotPositiveDefinite:
    case Errc::InvalidKernel:
    case Errc::InvalidMode:
    case Errc::InvalidConfig:
    case Errc::NonUniformGrid:
    case Errc::CflViolation:
    case Errc::EmptyWindow:
    case Errc::NonPositiveEnergy:
      return true;
    default:
      return false;
  }
}

}  // namespace gpl
