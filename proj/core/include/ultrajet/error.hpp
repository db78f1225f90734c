#pragma once

#include <stdexcept>
#include <string>

namespace ultrajet {

/// Failure categories surfaced by the library. Every truncation or
/// undecidable condition has its own kind so callers can map it to a
/// report entry or an exit code instead of guessing.
enum class ErrorKind {
  InvalidArgument,
  SupremumAtCutoff,
  InfimumAtCutoff,
  GammaAtCutoff,
  NotLogConvex,
  BracketFailure,
  DivergentTail,
  InconclusiveTrend,
  SandwichUnverifiable,
  MissingRow,
  HypothesisViolated,
  NotTotallyOrdered,
  EmptyCover,
  DegenerateSupport,
  UncoveredPoint,
  OrderOverflow,
  NotInClass,
  PlanInvalid,
  OutsideRegion,
  PrecisionFloor,
  Schema,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ultrajet
