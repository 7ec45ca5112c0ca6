#pragma once

#include <stdexcept>
#include <string>

namespace framesum {

// Numeric values are part of the C ABI (see framesum.h); append only.
enum class Errc : int {
  InvalidArgument = 1,
  DimensionMismatch = 2,
  CountMismatch = 3,
  NotHermitian = 4,
  NoConvergence = 5,
  SingularOperator = 6,
  NotAFrame = 7,
  InvalidBounds = 8,
  NotTight = 9,
  ZeroCoefficient = 10,
  AlignmentMismatch = 11,
  InconsistentSpec = 12,
  NotPositiveA = 13,
  EmptySupport = 14,
  DegenerateLattice = 15,
  GridMismatch = 16,
  InvalidBoundsForFrame = 17,
  ConditionNotMet = 18,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace framesum
