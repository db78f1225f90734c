#include "ultrajet/error.hpp"

namespace ultrajet {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SupremumAtCutoff: return "SupremumAtCutoff";
    case ErrorKind::InfimumAtCutoff: return "InfimumAtCutoff";
    case ErrorKind::GammaAtCutoff: return "GammaAtCutoff";
    case ErrorKind::NotLogConvex: return "NotLogConvex";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::DivergentTail: return "DivergentTail";
    case ErrorKind::InconclusiveTrend: return "InconclusiveTrend";
    case ErrorKind::SandwichUnverifiable: return "SandwichUnverifiable";
    case ErrorKind::MissingRow: return "MissingRow";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::NotTotallyOrdered: return "NotTotallyOrdered";
    case ErrorKind::EmptyCover: return "EmptyCover";
    case ErrorKind::DegenerateSupport: return "DegenerateSupport";
    case ErrorKind::UncoveredPoint: return "UncoveredPoint";
    case ErrorKind::OrderOverflow: return "OrderOverflow";
    case ErrorKind::NotInClass: return "NotInClass";
    case ErrorKind::PlanInvalid: return "PlanInvalid";
    case ErrorKind::OutsideRegion: return "OutsideRegion";
    case ErrorKind::PrecisionFloor: return "PrecisionFloor";
    case ErrorKind::Schema: return "Schema";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace ultrajet
