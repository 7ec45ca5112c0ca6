#pragma once

// Sufficient conditions and predicted bounds for sums of frames, the
// matching sum-frame constructors, and certification of a prediction
// against the spectrum of the frame actually built.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "framesum/frames.hpp"
#include "framesum/linalg.hpp"

namespace framesum {

namespace tol {
/// Relative slack allowed when bracketing exact bounds with predicted ones.
inline constexpr double kCertify = 1e-9;
/// Tolerance for caller-supplied m_i / ||theta_i|| against recomputed singular values.
inline constexpr double kOperatorSpec = 1e-10;
}  // namespace tol

/// Theorem output. condition_holds is true iff condition_margin > 0; a
/// margin of exactly zero fails the strict inequality.
struct PredictedBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool condition_holds = false;
  double condition_margin = 0.0;
};

/// sum_i c_i * (frame i), vector by vector. `pivot` is zero-based.
struct WeightedSumSpec {
  std::vector<FiniteFrame> frames;
  std::vector<Complex> coefficients;
  std::size_t pivot = 0;
};

PredictedBounds finite_sum_predict(std::span<const FrameBounds> bounds, std::span<const Complex> coefficients,
                                   std::size_t pivot);

struct PivotChoice {
  std::size_t pivot = 0;
  PredictedBounds predicted;
};

/// Evaluates every pivot and keeps the largest lower bound among those whose
/// condition holds; if none holds, returns the pivot with the largest margin.
PivotChoice best_pivot_predict(std::span<const FrameBounds> bounds, std::span<const Complex> coefficients);

/// Frame plus one of its duals: (A1 + A2 + 2, B1 + B2 + 2). Duality itself is
/// the caller's responsibility (see verify_dual).
PredictedBounds dual_sum_predict(const FrameBounds& b1, const FrameBounds& b2);

/// Frames mapped through theta1, theta2 and added. m_i is the lower bound of
/// theta_i^* (its smallest singular value), norm_i the operator norm.
struct OperatorSumSpec {
  FiniteFrame frame1;
  FiniteFrame frame2;
  CMatrix theta1;
  CMatrix theta2;
  double m1 = 0.0;
  double m2 = 0.0;
  double norm1 = 0.0;
  double norm2 = 0.0;

  /// Fills m_i and norm_i from the singular values of theta_i.
  static OperatorSumSpec from_operators(FiniteFrame frame1, FiniteFrame frame2, CMatrix theta1, CMatrix theta2);
};

/// Recomputes m_i and norm_i from theta_i; throws InconsistentSpec if the
/// stored values disagree by more than kOperatorSpec.
PredictedBounds operator_sum_predict(const OperatorSumSpec& spec, const FrameBounds& b1, const FrameBounds& b2);

/// min/max modulus over a finite scalar sequence.
struct ScalarEnvelope {
  double inf_abs = 0.0;
  double sup_abs = 0.0;
  std::vector<Complex> sequence;

  static ScalarEnvelope from_sequence(std::vector<Complex> sequence);
};

PredictedBounds perturbed_sum_predict(const ScalarEnvelope& alpha, const ScalarEnvelope& beta, const FrameBounds& b1,
                                      const FrameBounds& b2);

FiniteFrame build_sum_frame(const WeightedSumSpec& spec);
FiniteFrame build_operator_sum_frame(const OperatorSumSpec& spec);
FiniteFrame build_perturbed_sum_frame(const ScalarEnvelope& alpha, const ScalarEnvelope& beta,
                                      const FiniteFrame& frame1, const FiniteFrame& frame2);

struct CertificationReport {
  PredictedBounds predicted;
  FrameBounds exact;
  bool certified = false;
  double lower_slack = 0.0;  // A* - predicted.lower
  double upper_slack = 0.0;  // predicted.upper - B*
  double predicted_width = 0.0;
  double exact_width = 0.0;
  std::vector<std::string> notes;
};

/// Brackets the exact bounds of `actual` with `predicted`. Requires
/// predicted.condition_holds (ConditionNotMet otherwise); NotAFrame from the
/// oracle propagates.
CertificationReport certify(const PredictedBounds& predicted, const FiniteFrame& actual);

}  // namespace framesum
