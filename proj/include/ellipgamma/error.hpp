#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ellipgamma {

/// Failure categories reported by every module. The CLI prints the name
/// returned by errc_name() and maps all of them to exit status 2.
enum class Errc {
  InvalidArgument,
  Overflow,
  NoUpperRoot,
  DivisionByZero,
  DimensionMismatch,
  SingularForm,
  RankDeficient,
  DegenerateCone,
  ConvergenceTooSlow,
  OutsideCenterStrip,
  DepthExceeded,
  SmallDenominator,
  ZeroOmega,
  RealRatio,
  RealParameter,
  CenterStripViolation,
  ZeroValue,
  NoMatch,
  Ambiguous,
  NoRelation,
  InvalidConfig,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace ellipgamma
