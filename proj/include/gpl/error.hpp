#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gpl {

enum class Errc {
  NonPositiveConstant,
  NotPositiveDefinite,
  InvalidKernel,
  InvalidMode,
  InvalidConfig,
  NoConvergence,
  OverflowScale,
  HistoryGap,
  NonUniformGrid,
  CflViolation,
  DivergentAmplitude,
  SingularSystem,
  EmptyWindow,
  NonPositiveEnergy,
};

std::string_view to_string(Errc code) noexcept;

/// Input rejected by a validation rule (CLI exit code 2).
bool is_validation_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gpl
