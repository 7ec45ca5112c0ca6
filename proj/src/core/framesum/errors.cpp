#include "framesum/errors.hpp"

namespace framesum {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::SingularOperator: return "SingularOperator";
    case Errc::NotAFrame: return "NotAFrame";
    case Errc::InvalidBounds: return "InvalidBounds";
    case Errc::NotTight: return "NotTight";
    case Errc::ZeroCoefficient: return "ZeroCoefficient";
    case Errc::AlignmentMismatch: return "AlignmentMismatch";
    case Errc::InconsistentSpec: return "InconsistentSpec";
    case Errc::NotPositiveA: return "NotPositiveA";
    case Errc::EmptySupport: return "EmptySupport";
    case Errc::DegenerateLattice: return "DegenerateLattice";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::InvalidBoundsForFrame: return "InvalidBoundsForFrame";
    case Errc::ConditionNotMet: return "ConditionNotMet";
  }
  return "Unknown";
}

}  // namespace framesum
