#include "ellipgamma/error.hpp"

namespace ellipgamma {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Overflow: return "Overflow";
    case Errc::NoUpperRoot: return "NoUpperRoot";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::SingularForm: return "SingularForm";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::DegenerateCone: return "DegenerateCone";
    case Errc::ConvergenceTooSlow: return "ConvergenceTooSlow";
    case Errc::OutsideCenterStrip: return "OutsideCenterStrip";
    case Errc::DepthExceeded: return "DepthExceeded";
    case Errc::SmallDenominator: return "SmallDenominator";
    case Errc::ZeroOmega: return "ZeroOmega";
    case Errc::RealRatio: return "RealRatio";
    case Errc::RealParameter: return "RealParameter";
    case Errc::CenterStripViolation: return "CenterStripViolation";
    case Errc::ZeroValue: return "ZeroValue";
    case Errc::NoMatch: return "NoMatch";
    case Errc::Ambiguous: return "Ambiguous";
    case Errc::NoRelation: return "NoRelation";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace ellipgamma
