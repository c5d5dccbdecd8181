#include "conecode/errors.hpp"

namespace conecode {

const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::non_positive: return "NonPositive";
    case Errc::depth_exceeded: return "DepthExceeded";
    case Errc::precision_exceeded: return "PrecisionExceeded";
    case Errc::weight_overflow: return "WeightOverflow";
    case Errc::not_dyadic: return "NotDyadic";
    case Errc::zero_mass: return "ZeroMass";
    case Errc::invalid_input: return "InvalidInput";
    case Errc::schedule_not_monotone: return "ScheduleNotMonotone";
    case Errc::not_monotone_stages: return "NotMonotoneStages";
    case Errc::internal_invariant_broken: return "InternalInvariantBroken";
    case Errc::not_covered: return "NotCovered";
    case Errc::stream_finalized: return "StreamFinalized";
    case Errc::bound_violated: return "BoundViolated";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace conecode
