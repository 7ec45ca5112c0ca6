#include "framesum/sums.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "framesum/errors.hpp"

namespace framesum {

namespace {

PredictedBounds finish(double margin, double lower, double upper) {
  PredictedBounds out;
  out.condition_margin = margin;
  out.condition_holds = margin > 0.0;
  out.lower = lower;
  out.upper = upper;
  return out;
}

void check_coefficients(std::span<const Complex> coefficients) {
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const auto& c = coefficients[i];
    checked_complex(c.real(), c.imag());
    if (c == Complex{}) {
      std::ostringstream os;
      os << "coefficient " << i + 1 << " must be nonzero";
      fail(Errc::ZeroCoefficient, os.str());
    }
  }
}

}  // namespace

PredictedBounds finite_sum_predict(std::span<const FrameBounds> bounds, std::span<const Complex> coefficients,
                                   std::size_t pivot) {
  const std::size_t k = bounds.size();
  if (k == 0) fail(Errc::InvalidArgument, "finite sum needs at least one frame");
  if (coefficients.size() != k) fail(Errc::AlignmentMismatch, "one coefficient per frame is required");
  if (pivot >= k) fail(Errc::InvalidArgument, "pivot index out of range");
  for (const auto& b : bounds) b.validate();
  check_coefficients(coefficients);

  const double cj = std::abs(coefficients[pivot]);
  const double sqrt_bj = std::sqrt(bounds[pivot].upper);

  double lhs = cj * bounds[pivot].lower;
  double cross = 0.0;  // sum_{i != j} |c_i| sqrt(B_i)
  double weighted_lower = 0.0;
  double weighted_upper = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double ci = std::abs(coefficients[i]);
    weighted_lower += ci * ci * bounds[i].lower;
    weighted_upper += ci * ci * bounds[i].upper;
    if (i == pivot) continue;
    lhs += ci * ci / cj * bounds[i].lower;
    cross += ci * std::sqrt(bounds[i].upper);
  }
  const double margin = lhs - 2.0 * sqrt_bj * cross;
  const double lower = weighted_lower - 2.0 * cj * sqrt_bj * cross;
  const double upper = static_cast<double>(k) * weighted_upper;
  return finish(margin, lower, upper);
}

PivotChoice best_pivot_predict(std::span<const FrameBounds> bounds, std::span<const Complex> coefficients) {
  if (bounds.empty()) fail(Errc::InvalidArgument, "finite sum needs at least one frame");
  PivotChoice best{0, finite_sum_predict(bounds, coefficients, 0)};
  for (std::size_t j = 1; j < bounds.size(); ++j) {
    const auto p = finite_sum_predict(bounds, coefficients, j);
    const bool better = best.predicted.condition_holds
                            ? (p.condition_holds && p.lower > best.predicted.lower)
                            : (p.condition_holds || p.condition_margin > best.predicted.condition_margin);
    if (better) best = {j, p};
  }
  return best;
}

PredictedBounds dual_sum_predict(const FrameBounds& b1, const FrameBounds& b2) {
  b1.validate();
  b2.validate();
  const double lower = b1.lower + b2.lower + 2.0;
  return finish(lower, lower, b1.upper + b2.upper + 2.0);
}

namespace {

void check_operator_shapes(const OperatorSumSpec& spec) {
  const std::size_t d = spec.frame1.dim();
  if (spec.frame2.dim() != d) fail(Errc::AlignmentMismatch, "operator-sum frames live in different dimensions");
  for (const CMatrix* t : {&spec.theta1, &spec.theta2}) {
    if (t->rows() != d || t->cols() != d) {
      std::ostringstream os;
      os << "operators must be " << d << "x" << d << ", got " << t->rows() << "x" << t->cols();
      fail(Errc::DimensionMismatch, os.str());
    }
  }
}

void cross_check(const char* name, double stored, double recomputed) {
  if (std::abs(stored - recomputed) > tol::kOperatorSpec * std::max(1.0, std::abs(recomputed))) {
    std::ostringstream os;
    os.precision(17);
    os << name << " = " << stored << " disagrees with the singular-value value " << recomputed;
    fail(Errc::InconsistentSpec, os.str());
  }
}

}  // namespace

OperatorSumSpec OperatorSumSpec::from_operators(FiniteFrame frame1, FiniteFrame frame2, CMatrix theta1,
                                                CMatrix theta2) {
  const auto s1 = extreme_singular_values(theta1);
  const auto s2 = extreme_singular_values(theta2);
  OperatorSumSpec spec{std::move(frame1), std::move(frame2), std::move(theta1), std::move(theta2),
                       s1.min,            s2.min,            s1.max,            s2.max};
  check_operator_shapes(spec);
  return spec;
}

PredictedBounds operator_sum_predict(const OperatorSumSpec& spec, const FrameBounds& b1, const FrameBounds& b2) {
  b1.validate();
  b2.validate();
  check_operator_shapes(spec);
  const auto s1 = extreme_singular_values(spec.theta1);
  const auto s2 = extreme_singular_values(spec.theta2);
  cross_check("m1", spec.m1, s1.min);
  cross_check("m2", spec.m2, s2.min);
  cross_check("norm1", spec.norm1, s1.max);
  cross_check("norm2", spec.norm2, s2.max);

  const double margin = b1.lower * s1.min * s1.min + b2.lower * s2.min * s2.min -
                        2.0 * std::sqrt(b1.upper * b2.upper) * s1.max * s2.max;
  const double root = std::sqrt(b1.upper) * s1.max + std::sqrt(b2.upper) * s2.max;
  return finish(margin, margin, root * root);
}

ScalarEnvelope ScalarEnvelope::from_sequence(std::vector<Complex> sequence) {
  if (sequence.empty()) fail(Errc::InvalidArgument, "scalar sequence must be nonempty");
  ScalarEnvelope env;
  env.inf_abs = std::abs(sequence.front());
  env.sup_abs = env.inf_abs;
  for (const auto& z : sequence) {
    checked_complex(z.real(), z.imag());
    env.inf_abs = std::min(env.inf_abs, std::abs(z));
    env.sup_abs = std::max(env.sup_abs, std::abs(z));
  }
  env.sequence = std::move(sequence);
  return env;
}

PredictedBounds perturbed_sum_predict(const ScalarEnvelope& alpha, const ScalarEnvelope& beta, const FrameBounds& b1,
                                      const FrameBounds& b2) {
  b1.validate();
  b2.validate();
  for (const auto* e : {&alpha, &beta}) {
    if (!(e->inf_abs >= 0.0 && e->inf_abs <= e->sup_abs && std::isfinite(e->sup_abs))) {
      fail(Errc::InvalidBounds, "scalar envelope needs 0 <= inf|.| <= sup|.| < inf");
    }
  }
  const double margin = alpha.inf_abs * alpha.inf_abs * b1.lower + beta.inf_abs * beta.inf_abs * b2.lower -
                        2.0 * alpha.sup_abs * beta.sup_abs * std::sqrt(b1.upper * b2.upper);
  const double root = alpha.sup_abs * std::sqrt(b1.upper) + beta.sup_abs * std::sqrt(b2.upper);
  return finish(margin, margin, root * root);
}

FiniteFrame build_sum_frame(const WeightedSumSpec& spec) {
  if (spec.frames.empty()) fail(Errc::InvalidArgument, "finite sum needs at least one frame");
  if (spec.coefficients.size() != spec.frames.size()) {
    fail(Errc::AlignmentMismatch, "one coefficient per frame is required");
  }
  check_coefficients(spec.coefficients);
  const auto& first = spec.frames.front();
  for (const auto& f : spec.frames) {
    if (f.dim() != first.dim() || f.size() != first.size()) {
      fail(Errc::AlignmentMismatch, "summed frames must share dimension and vector count");
    }
  }
  std::vector<CVector> out(first.size(), CVector(first.dim()));
  for (std::size_t i = 0; i < spec.frames.size(); ++i)
    for (std::size_t k = 0; k < first.size(); ++k)
      for (std::size_t r = 0; r < first.dim(); ++r) out[k][r] += spec.coefficients[i] * spec.frames[i][k][r];
  return FiniteFrame(first.dim(), std::move(out));
}

FiniteFrame build_operator_sum_frame(const OperatorSumSpec& spec) {
  check_operator_shapes(spec);
  if (spec.frame1.size() != spec.frame2.size()) {
    fail(Errc::AlignmentMismatch, "operator-sum frames must have the same vector count");
  }
  std::vector<CVector> out;
  out.reserve(spec.frame1.size());
  for (std::size_t k = 0; k < spec.frame1.size(); ++k) {
    CVector v = spec.theta1.apply(spec.frame1[k]);
    const CVector w = spec.theta2.apply(spec.frame2[k]);
    for (std::size_t r = 0; r < v.size(); ++r) v[r] += w[r];
    out.push_back(std::move(v));
  }
  return FiniteFrame(spec.frame1.dim(), std::move(out));
}

FiniteFrame build_perturbed_sum_frame(const ScalarEnvelope& alpha, const ScalarEnvelope& beta,
                                      const FiniteFrame& frame1, const FiniteFrame& frame2) {
  if (frame1.dim() != frame2.dim() || frame1.size() != frame2.size()) {
    fail(Errc::AlignmentMismatch, "perturbed-sum frames must share dimension and vector count");
  }
  if (alpha.sequence.size() != frame1.size() || beta.sequence.size() != frame1.size()) {
    fail(Errc::AlignmentMismatch, "scalar sequences must have one entry per frame vector");
  }
  std::vector<CVector> out(frame1.size(), CVector(frame1.dim()));
  for (std::size_t k = 0; k < frame1.size(); ++k)
    for (std::size_t r = 0; r < frame1.dim(); ++r)
      out[k][r] = alpha.sequence[k] * frame1[k][r] + beta.sequence[k] * frame2[k][r];
  return FiniteFrame(frame1.dim(), std::move(out));
}

CertificationReport certify(const PredictedBounds& predicted, const FiniteFrame& actual) {
  if (!predicted.condition_holds) {
    std::ostringstream os;
    os << "sufficient condition fails (margin " << predicted.condition_margin << "); nothing to certify";
    fail(Errc::ConditionNotMet, os.str());
  }
  const auto cert = exact_bounds(actual);
  CertificationReport report;
  report.predicted = predicted;
  report.exact = cert.bounds;
  report.lower_slack = cert.bounds.lower - predicted.lower;
  report.upper_slack = predicted.upper - cert.bounds.upper;
  report.certified = predicted.lower <= cert.bounds.lower * (1.0 + tol::kCertify) &&
                     predicted.upper >= cert.bounds.upper * (1.0 - tol::kCertify);
  report.predicted_width = (predicted.upper - predicted.lower) / (predicted.upper + predicted.lower);
  report.exact_width = cert.width;
  return report;
}

}  // namespace framesum
