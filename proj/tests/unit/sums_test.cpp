#include <gtest/gtest.h>

#include <cmath>

#include "framesum/algorithm.hpp"
#include "framesum/errors.hpp"
#include "framesum/sums.hpp"
#include "support.hpp"

using namespace framesum;

namespace {

const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r6 = std::sqrt(6.0);

FiniteFrame exfal_f() { return FiniteFrame(2, {{r6, r6}, {0.0, 2.0}, {2.0, 0.0}}); }
FiniteFrame exfal_g() { return FiniteFrame(2, {{0.0, 3.0}, {r3, 0.0}, {r3, 0.0}}); }
FiniteFrame tight4() { return FiniteFrame(2, {{2.0, 0.0}, {0.0, r2}, {0.0, r2}}); }

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no framesum::Error thrown";
  return Errc::InvalidArgument;
}

CMatrix scaled_identity(double s) { return CMatrix::identity(2).scaled(s); }

}  // namespace

// ---- worked examples ---------------------------------------------------------

TEST(FiniteSum, FiniteexaAnalogPrediction) {
  const std::vector<FrameBounds> b{{4, 16}, {1, 4}};
  const std::vector<Complex> c{-1.0 / 2000, 1.0 / 20};
  const auto p = finite_sum_predict(b, c, 0);
  EXPECT_TRUE(p.condition_holds);
  EXPECT_LE(fstest::rel_err(p.lower, 2101e-6), 1e-12);
  EXPECT_LE(fstest::rel_err(p.upper, 20008e-6), 1e-12);
  EXPECT_LE(fstest::rel_err(p.condition_margin, 2501.0 / 500 - 4.0 / 5), 1e-12);

  const FiniteFrame g(2, {{2.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}});
  const auto built = build_sum_frame({{exfal_f(), g}, c, 0});
  EXPECT_TRUE(certify(p, built).certified);
}

TEST(FiniteSum, ExfalWithStatedBoundsIsNotCertified) {
  const std::vector<Complex> c{1.0, 100.0};
  const std::vector<FrameBounds> stated{{4, 16}, {9, 9}};
  const auto p = finite_sum_predict(stated, c, 0);
  EXPECT_DOUBLE_EQ(p.lower, 87604.0);
  EXPECT_DOUBLE_EQ(p.upper, 180032.0);
  EXPECT_EQ(render_width4(width({p.lower, p.upper})), "0.3453");

  const auto built = build_sum_frame({{exfal_f(), exfal_g()}, c, 0});
  const auto r = certify(p, built);
  // The optimal lower bound of F + 100 G is about 60664.46 < 87604.
  EXPECT_FALSE(r.certified);
  EXPECT_NEAR(r.exact.lower, 60664.4585, 1e-4);
  EXPECT_NEAR(r.exact.upper, 91518.0556, 1e-4);
  EXPECT_LT(r.lower_slack, 0.0);
}

TEST(FiniteSum, ExfalWithOptimalInputsIsCertified) {
  const std::vector<Complex> c{1.0, 100.0};
  const std::vector<FrameBounds> oracle{exact_bounds(exfal_f()).bounds, exact_bounds(exfal_g()).bounds};
  const auto p = finite_sum_predict(oracle, c, 0);
  EXPECT_NEAR(p.lower, 57604.0, 1e-8);
  EXPECT_NEAR(p.upper, 180032.0, 1e-7);
  const auto r = certify(p, build_sum_frame({{exfal_f(), exfal_g()}, c, 0}));
  EXPECT_TRUE(r.certified);
  EXPECT_GT(r.lower_slack, 0.0);
}

TEST(FiniteSum, ZeroMarginFailsTheStrictInequality) {
  // |c1| A1 + |c2|^2/|c1| A2 - 2 sqrt(B1) |c2| sqrt(B2) = 1 + 1 - 2 = 0.
  const std::vector<FrameBounds> b{{1, 1}, {1, 1}};
  const std::vector<Complex> c{1.0, 1.0};
  const auto p = finite_sum_predict(b, c, 0);
  EXPECT_FALSE(p.condition_holds);
  EXPECT_EQ(p.condition_margin, 0.0);
  EXPECT_EQ(code_of([&] { certify(p, exfal_f()); }), Errc::ConditionNotMet);
}

TEST(FiniteSum, ArgumentErrors) {
  const std::vector<FrameBounds> b{{1, 2}, {1, 2}};
  const std::vector<Complex> c{1.0, 0.0};
  EXPECT_EQ(code_of([&] { finite_sum_predict(b, c, 0); }), Errc::ZeroCoefficient);
  const std::vector<Complex> c3{1.0, 1.0, 1.0};
  EXPECT_EQ(code_of([&] { finite_sum_predict(b, c3, 0); }), Errc::AlignmentMismatch);
  const std::vector<Complex> c2{1.0, 2.0};
  EXPECT_EQ(code_of([&] { finite_sum_predict(b, c2, 2); }), Errc::InvalidArgument);
  const std::vector<FrameBounds> bad{{2, 1}, {1, 2}};
  EXPECT_EQ(code_of([&] { finite_sum_predict(bad, c2, 0); }), Errc::InvalidBounds);
  EXPECT_EQ(code_of([&] { build_sum_frame({{exfal_f(), FiniteFrame(2, {{1.0, 0.0}, {0.0, 1.0}})}, c2, 0}); }),
            Errc::AlignmentMismatch);
}

TEST(FiniteSum, BestPivotMaximisesTheLowerBound) {
  const std::vector<FrameBounds> b{{4, 16}, {1, 4}, {2, 3}};
  const std::vector<Complex> c{0.01, 1.0, 0.02};
  const auto best = best_pivot_predict(b, c);
  for (std::size_t j = 0; j < b.size(); ++j) {
    const auto p = finite_sum_predict(b, c, j);
    if (p.condition_holds) EXPECT_GE(best.predicted.lower, p.lower);
  }
  EXPECT_TRUE(best.predicted.condition_holds);
}

TEST(DualSum, DualexaalgoPrediction) {
  const auto p = dual_sum_predict({1.0 / 3, 7.0 / 3}, {7.0 / 8, 3.0});
  EXPECT_NEAR(p.lower, 77.0 / 24, 1e-14);
  EXPECT_NEAR(p.upper, 22.0 / 3, 1e-14);
  EXPECT_TRUE(p.condition_holds);
  EXPECT_EQ(render_width4(width({p.lower, p.upper})), "0.3913");

  const FiniteFrame f(3, {{1 / r3, 0, 0}, {0, 1 / r3, 0}, {0, 0, 1 / r3}, {r2, 0, 0}, {0, 0, r2}});
  const FiniteFrame g(3, {{r3 / 2, 0, 0}, {0, r3, 0}, {0, 0, r3 / 2}, {1 / (2 * r2), 0, 0}, {0, 0, 1 / (2 * r2)}});
  const std::vector<Complex> ones{1.0, 1.0};
  const auto r = certify(p, build_sum_frame({{f, g}, ones, 0}));
  EXPECT_TRUE(r.certified);
  EXPECT_LE(fstest::rel_err(r.exact.lower, 125.0 / 24), 1e-9);
  EXPECT_LE(fstest::rel_err(r.exact.upper, 16.0 / 3), 1e-9);
}

TEST(OperatorSum, Operexa1AnalogPrediction) {
  const auto spec = OperatorSumSpec::from_operators(exfal_f(), tight4(), scaled_identity(0.25), CMatrix::identity(2));
  EXPECT_DOUBLE_EQ(spec.m1, 0.25);
  EXPECT_DOUBLE_EQ(spec.norm2, 1.0);
  const auto p = operator_sum_predict(spec, {4, 16}, {4, 4});
  EXPECT_NEAR(p.lower, 0.25, 1e-14);
  EXPECT_NEAR(p.upper, 9.0, 1e-14);
  EXPECT_TRUE(certify(p, build_operator_sum_frame(spec)).certified);
}

TEST(OperatorSum, OperexaalgoPrediction) {
  const auto spec =
      OperatorSumSpec::from_operators(exfal_f(), tight4(), scaled_identity(1.0 / 160), CMatrix::identity(2));
  const auto p = operator_sum_predict(spec, {4, 16}, {4, 4});
  EXPECT_NEAR(p.lower, 24961.0 / 6400, 1e-13);
  EXPECT_NEAR(p.upper, 6561.0 / 1600, 1e-13);
  EXPECT_EQ(render_width4(width({p.lower, p.upper})), "0.0250");
  const auto r = certify(p, build_operator_sum_frame(spec));
  EXPECT_TRUE(r.certified);
  EXPECT_NEAR(r.exact.lower, 3.99846, 1e-5);
  EXPECT_NEAR(r.exact.upper, 4.09891, 1e-5);
}

TEST(OperatorSum, InconsistentStoredNormsAreRejected) {
  auto spec = OperatorSumSpec::from_operators(exfal_f(), tight4(), scaled_identity(0.25), CMatrix::identity(2));
  spec.norm1 = 0.5;
  EXPECT_EQ(code_of([&] { operator_sum_predict(spec, {4, 16}, {4, 4}); }), Errc::InconsistentSpec);
}

TEST(OperatorSum, ShapeErrors) {
  EXPECT_EQ(code_of([] {
              OperatorSumSpec::from_operators(exfal_f(), tight4(), CMatrix::identity(3), CMatrix::identity(2));
            }),
            Errc::DimensionMismatch);
}

TEST(PerturbedSum, BddexaAnalogPrediction) {
  const auto a = ScalarEnvelope::from_sequence({-0.5, 0.5, 0.5});
  const auto b = ScalarEnvelope::from_sequence({-3.0, 3.0, -3.0});
  const auto p = perturbed_sum_predict(a, b, {4, 16}, {4, 4});
  EXPECT_NEAR(p.lower, 13.0, 1e-13);
  EXPECT_NEAR(p.upper, 64.0, 1e-13);
  EXPECT_TRUE(certify(p, build_perturbed_sum_frame(a, b, exfal_f(), tight4())).certified);
}

TEST(PerturbedSum, BddexaalgoPrediction) {
  std::vector<Complex> alpha, beta;
  for (int k = 1; k <= 3; ++k) {
    alpha.push_back(std::pow(-1.0, k) / 4);
    beta.push_back(std::pow(-1.0, k) * 4);
  }
  const auto a = ScalarEnvelope::from_sequence(alpha);
  const auto b = ScalarEnvelope::from_sequence(beta);
  const auto p = perturbed_sum_predict(a, b, {4, 16}, {4, 4});
  EXPECT_NEAR(p.lower, 193.0 / 4, 1e-12);
  EXPECT_NEAR(p.upper, 81.0, 1e-12);
  EXPECT_EQ(render_width4(width({p.lower, p.upper})), "0.2533");
  const auto r = certify(p, build_perturbed_sum_frame(a, b, exfal_f(), tight4()));
  EXPECT_TRUE(r.certified);
  EXPECT_NEAR(r.exact.lower, 63.9896, 1e-4);
  EXPECT_NEAR(r.exact.upper, 80.7152, 1e-4);
}

TEST(PerturbedSum, AlignmentAndEmptySequences) {
  const auto a = ScalarEnvelope::from_sequence({1.0, 1.0});
  const auto b = ScalarEnvelope::from_sequence({1.0, 1.0, 1.0});
  EXPECT_EQ(code_of([&] { build_perturbed_sum_frame(a, b, exfal_f(), tight4()); }), Errc::AlignmentMismatch);
  EXPECT_EQ(code_of([] { ScalarEnvelope::from_sequence({}); }), Errc::InvalidArgument);
}

// ---- soundness: whenever a condition holds the prediction brackets the oracle ----

namespace {

struct Soundness {
  int accepted = 0;
  int attempts = 0;
  int failures = 0;
};

constexpr int kInstances = 100;
constexpr int kMaxAttempts = 200000;

std::vector<Complex> random_coefficients(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 4.0);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  std::vector<Complex> c(k);
  for (auto& z : c) {
    z = fstest::gauss(rng);
    if (std::abs(z) < 1e-3) z = 1.0;
  }
  c[pick(rng)] *= std::pow(10.0, u(rng));
  return c;
}

}  // namespace

TEST(SumsProperty, FiniteSumSoundnessForTwoFrames) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 8), extra(0, 4);
  Soundness s;
  while (s.accepted < kInstances && s.attempts++ < kMaxAttempts) {
    const auto d = dim(rng), n = d + extra(rng);
    std::vector<FiniteFrame> frames;
    std::vector<FrameBounds> bounds;
    for (std::size_t i = 0; i < 2; ++i) {
      frames.push_back(fstest::random_frame(d, n, rng));
      bounds.push_back(exact_bounds(frames.back()).bounds);
    }
    const auto c = random_coefficients(2, rng);
    const auto choice = best_pivot_predict(bounds, c);
    if (!choice.predicted.condition_holds) continue;
    ++s.accepted;
    const auto r = certify(choice.predicted, build_sum_frame({frames, c, choice.pivot}));
    if (!r.certified) ++s.failures;
  }
  EXPECT_EQ(s.accepted, kInstances);
  EXPECT_EQ(s.failures, 0);
}

// The lower estimate only subtracts cross terms that involve the pivot frame.
// With three or more frames the remaining pairs can cancel: here frames 2 and 3
// are identical and enter with opposite signs, so the sum collapses to 0.1 * F1.
TEST(SumsProperty, FiniteSumLowerBoundIgnoresNonPivotCrossTerms) {
  const FiniteFrame f1(1, {{1.0}, {0.0}});
  const FiniteFrame f2(1, {{0.0}, {1.0}});
  const std::vector<Complex> c{0.1, 1.0, -1.0};
  const std::vector<FrameBounds> b{{1, 1}, {1, 1}, {1, 1}};
  const auto choice = best_pivot_predict(b, c);
  EXPECT_EQ(choice.pivot, 0u);
  ASSERT_TRUE(choice.predicted.condition_holds);
  EXPECT_NEAR(choice.predicted.lower, 0.01 + 2.0 - 0.4, 1e-14);
  const auto r = certify(choice.predicted, build_sum_frame({{f1, f2, f2}, c, 0}));
  EXPECT_NEAR(r.exact.lower, 0.01, 1e-14);
  EXPECT_FALSE(r.certified);
}

TEST(SumsProperty, FiniteSumSoundnessFailsForSomeThreeAndFourFrameSums) {
  // Same sampler with k in {3, 4}: failures are expected and counted, not hidden.
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 8), extra(0, 4), kk(3, 4);
  Soundness s;
  while (s.accepted < 1000 && s.attempts++ < kMaxAttempts) {
    const auto d = dim(rng), n = d + extra(rng), k = kk(rng);
    std::vector<FiniteFrame> frames;
    std::vector<FrameBounds> bounds;
    for (std::size_t i = 0; i < k; ++i) {
      frames.push_back(fstest::random_frame(d, n, rng));
      bounds.push_back(exact_bounds(frames.back()).bounds);
    }
    const auto c = random_coefficients(k, rng);
    const auto choice = best_pivot_predict(bounds, c);
    if (!choice.predicted.condition_holds) continue;
    ++s.accepted;
    const auto r = certify(choice.predicted, build_sum_frame({frames, c, choice.pivot}));
    EXPECT_LE(r.exact.upper, r.predicted.upper * (1 + tol::kCertify));
    if (!r.certified) ++s.failures;
  }
  EXPECT_EQ(s.accepted, 1000);
  EXPECT_GT(s.failures, 0);
}

TEST(SumsProperty, DualSumSoundness) {
  std::mt19937_64 rng(2025);
  std::uniform_int_distribution<std::size_t> dim(1, 8), extra(0, 4);
  for (int t = 0; t < kInstances; ++t) {
    const auto d = dim(rng), n = d + extra(rng);
    const auto f = fstest::random_frame(d, n, rng);
    // G = S^{-1} T + W (I - T^* S^{-1} T) satisfies G T^* = I for any W.
    const auto tm = fstest::synthesis_matrix(f);
    const auto sinv = inverse_hpd(frame_operator(f));
    const auto w = fstest::random_matrix(d, n, rng).scaled(0.5);
    const auto proj = CMatrix::identity(n) - tm.adjoint() * sinv * tm;
    const auto gm = sinv * tm + w * proj;
    const auto g = fstest::frame_from_columns(gm);
    ASSERT_TRUE(verify_dual(f, g, 4, t).is_dual);
    const auto p = dual_sum_predict(exact_bounds(f).bounds, exact_bounds(g).bounds);
    const std::vector<Complex> ones{1.0, 1.0};
    EXPECT_TRUE(certify(p, build_sum_frame({{f, g}, ones, 0})).certified) << "instance " << t;
  }
}

TEST(SumsProperty, OperatorSumSoundness) {
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<std::size_t> dim(1, 8), extra(0, 4);
  std::uniform_real_distribution<double> small(0.0, 0.3);
  Soundness s;
  while (s.accepted < kInstances && s.attempts++ < kMaxAttempts) {
    const auto d = dim(rng), n = d + extra(rng);
    const auto f1 = fstest::random_frame(d, n, rng);
    const auto f2 = fstest::random_frame(d, n, rng);
    const auto t1 = fstest::random_matrix(d, d, rng).scaled(small(rng));
    const auto t2 = CMatrix::identity(d) - fstest::random_matrix(d, d, rng).scaled(small(rng) / d);
    const auto spec = OperatorSumSpec::from_operators(f1, f2, t1, t2);
    const auto p = operator_sum_predict(spec, exact_bounds(f1).bounds, exact_bounds(f2).bounds);
    if (!p.condition_holds) continue;
    ++s.accepted;
    if (!certify(p, build_operator_sum_frame(spec)).certified) ++s.failures;
  }
  EXPECT_EQ(s.accepted, kInstances);
  EXPECT_EQ(s.failures, 0);
}

TEST(SumsProperty, PerturbedSumSoundness) {
  std::mt19937_64 rng(2027);
  std::uniform_int_distribution<std::size_t> dim(1, 8), extra(0, 4);
  std::uniform_real_distribution<double> mod(0.8, 1.2), phase(0.0, 6.283185307179586), scale(0.0, 0.2);
  Soundness s;
  while (s.accepted < kInstances && s.attempts++ < kMaxAttempts) {
    const auto d = dim(rng), n = d + extra(rng);
    const auto f1 = fstest::random_frame(d, n, rng);
    const auto f2 = fstest::random_frame(d, n, rng);
    const double sa = scale(rng);
    std::vector<Complex> alpha(n), beta(n);
    for (auto& z : alpha) z = std::polar(sa * mod(rng), phase(rng));
    for (auto& z : beta) z = std::polar(mod(rng), phase(rng));
    const auto a = ScalarEnvelope::from_sequence(alpha);
    const auto b = ScalarEnvelope::from_sequence(beta);
    const auto p = perturbed_sum_predict(a, b, exact_bounds(f1).bounds, exact_bounds(f2).bounds);
    if (!p.condition_holds) continue;
    ++s.accepted;
    if (!certify(p, build_perturbed_sum_frame(a, b, f1, f2)).certified) ++s.failures;
  }
  EXPECT_EQ(s.accepted, kInstances);
  EXPECT_EQ(s.failures, 0);
}

TEST(SumsProperty, UpperBoundsHoldEvenWithoutTheCondition) {
  // The upper estimates follow from the triangle inequality alone.
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 1 + t % 6, n = d + t % 3;
    const auto f1 = fstest::random_frame(d, n, rng);
    const auto f2 = fstest::random_frame(d, n, rng);
    const std::vector<Complex> c{fstest::gauss(rng), fstest::gauss(rng)};
    const std::vector<FrameBounds> b{exact_bounds(f1).bounds, exact_bounds(f2).bounds};
    const auto p = finite_sum_predict(b, c, 0);
    const auto sum = build_sum_frame({{f1, f2}, c, 0});
    const auto [lo, hi] = fstest::eigen_frame_bounds(sum);
    EXPECT_LE(hi, p.upper * (1 + tol::kCertify));
  }
}
