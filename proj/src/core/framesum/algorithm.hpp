#pragma once

// Frame algorithm: psi_0 = 0, psi_k = psi_{k-1} + 2/(A+B) S (phi - psi_{k-1}),
// with ||phi - psi_k|| <= width^k ||phi||.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "framesum/frames.hpp"

namespace framesum {

inline constexpr std::size_t kDefaultMaxIters = 200;
/// Default stopping tolerance, relative to ||phi||.
inline constexpr double kDefaultRelativeStop = 1e-12;

struct AlgoConfig {
  FiniteFrame frame;
  FrameBounds bounds_used;  // any valid pair, checked against the spectrum of S
  std::size_t max_iters = kDefaultMaxIters;
  std::optional<double> stop_tol;  // absolute; defaults to kDefaultRelativeStop * ||phi||
};

struct ConvergenceRecord {
  std::size_t k = 0;
  double error = 0.0;     // ||phi - psi_k||
  double envelope = 0.0;  // width^k ||phi||
};

struct AlgoRun {
  std::vector<ConvergenceRecord> records;  // k = 0 .. K
  CVector iterate;                         // psi_K
};

/// Throws InvalidBoundsForFrame if bounds_used does not bracket the spectrum
/// of S (relative slack 1e-9), DimensionMismatch for a wrong target length.
AlgoRun run(const AlgoConfig& config, std::span<const Complex> target);

struct RunComparison {
  std::vector<std::vector<ConvergenceRecord>> runs;

  /// Longest run length; shorter runs stopped early on stop_tol.
  std::size_t rows() const;
};

RunComparison compare_runs(std::span<const AlgoConfig> configs, std::span<const CVector> targets);

struct WidthEntry {
  std::string label;
  double width = 0.0;
  std::string rendered;  // four decimals, truncated
};

std::vector<WidthEntry> width_report(std::span<const std::pair<std::string, FrameBounds>> bounds);

/// Four-decimal rendering by truncation (0.548387... -> "0.5483").
std::string render_width4(double width);

}  // namespace framesum
