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

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no framesum::Error thrown";
  return Errc::InvalidArgument;
}

}  // namespace

TEST(Algorithm, EnvelopeHoldsForExfalFrame) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto phi = random_unit_vector(2, seed);
    const auto run_ = run({exfal_f(), {4, 16}, 50, 0.0}, phi);
    ASSERT_EQ(run_.records.size(), 51u);
    for (const auto& r : run_.records) {
      EXPECT_LE(r.error, std::pow(0.6, double(r.k)) * (1 + 1e-9)) << "seed " << seed << " k " << r.k;
      EXPECT_DOUBLE_EQ(r.envelope, std::pow(0.6, double(r.k)));
    }
  }
}

TEST(Algorithm, TightFrameConvergesInOneStep) {
  const FiniteFrame g(2, {{2.0, 0.0}, {0.0, r2}, {0.0, r2}});
  const CVector phi{Complex(0.3, -1.0), Complex(2.0, 0.5)};
  const auto r = run({g, {4, 4}, 10, std::nullopt}, phi);
  ASSERT_GE(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].error, norm(phi));
  EXPECT_EQ(r.records[0].envelope, norm(phi));
  EXPECT_LE(r.records[1].error, 1e-12 * norm(phi));
  EXPECT_EQ(r.records[1].envelope, 0.0);
  // Default stopping tolerance ends the run right there.
  EXPECT_EQ(r.records.size(), 2u);
  EXPECT_NEAR(std::abs(r.iterate[0] - phi[0]), 0.0, 1e-12);
}

TEST(Algorithm, RejectsBoundsThatAreNotFrameBounds) {
  const std::vector<Complex> c{1.0, 100.0};
  const auto sum = build_sum_frame({{exfal_f(), exfal_g()}, c, 0});
  const auto phi = random_unit_vector(2, 0);
  // The stated prediction for F + 100 G has a lower bound above lambda_min(S).
  EXPECT_EQ(code_of([&] { run({sum, {87604, 180032}, 50, std::nullopt}, phi); }), Errc::InvalidBoundsForFrame);
  EXPECT_EQ(code_of([&] { run({exfal_f(), {4, 15}, 50, std::nullopt}, phi); }), Errc::InvalidBoundsForFrame);
  EXPECT_EQ(code_of([&] { run({exfal_f(), {4, 16}, 50, std::nullopt}, CVector(3)); }), Errc::DimensionMismatch);
  EXPECT_EQ(code_of([&] { run({exfal_f(), {5, 4}, 50, std::nullopt}, phi); }), Errc::InvalidBounds);
}

TEST(Algorithm, LooserValidBoundsStillConverge) {
  const std::vector<Complex> c{1.0, 100.0};
  const auto sum = build_sum_frame({{exfal_f(), exfal_g()}, c, 0});
  const auto phi = random_unit_vector(2, 9);
  const auto r = run({sum, {57604, 180032}, 200, std::nullopt}, phi);
  for (const auto& rec : r.records) EXPECT_LE(rec.error, rec.envelope * (1 + 1e-9) + 1e-12);
  EXPECT_LE(r.records.back().error, 1e-12 * norm(phi) * 1.0000001);
}

TEST(Algorithm, ZeroTargetStopsImmediately) {
  const auto r = run({exfal_f(), {4, 16}, 50, std::nullopt}, CVector(2));
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].error, 0.0);
}

TEST(AlgorithmProperty, EnvelopeHoldsOnRandomFramesAndValidBounds) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> loosen(1.0, 1.5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 1 + t % 8;
    const auto f = fstest::random_frame(d, d + t % 4, rng);
    const auto c = exact_bounds(f);
    const FrameBounds used{c.bounds.lower / loosen(rng), c.bounds.upper * loosen(rng)};
    const auto phi = random_unit_vector(d, t);
    const auto r = run({f, used, 60, 0.0}, phi);
    for (const auto& rec : r.records) EXPECT_LE(rec.error, rec.envelope * (1 + 1e-9) + 1e-12) << t;
  }
}

TEST(Algorithm, WidthRenderingTruncates) {
  EXPECT_EQ(render_width4(0.6), "0.6000");
  EXPECT_EQ(render_width4(17.0 / 31.0), "0.5483");
  EXPECT_EQ(render_width4(99.0 / 253.0), "0.3913");
  EXPECT_EQ(render_width4(92428.0 / 267636.0), "0.3453");
  EXPECT_EQ(render_width4(1283.0 / 51205.0), "0.0250");
  EXPECT_EQ(render_width4(131.0 / 517.0), "0.2533");
  EXPECT_EQ(render_width4(0.75), "0.7500");
  EXPECT_EQ(render_width4(0.0), "0.0000");
  EXPECT_EQ(render_width4(0.99999), "0.9999");
}

TEST(Algorithm, WidthReport) {
  const std::vector<std::pair<std::string, FrameBounds>> in{{"F", {1.0 / 3, 7.0 / 3}}, {"G", {7.0 / 8, 3}}};
  const auto out = width_report(in);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].label, "F");
  EXPECT_EQ(out[0].rendered, "0.7500");
  EXPECT_EQ(out[1].rendered, "0.5483");
}

TEST(Algorithm, CompareRunsAlignsSeries) {
  const FiniteFrame g(2, {{2.0, 0.0}, {0.0, r2}, {0.0, r2}});
  const std::vector<AlgoConfig> configs{{exfal_f(), {4, 16}, 30, std::nullopt}, {g, {4, 4}, 30, std::nullopt}};
  const std::vector<CVector> targets{random_unit_vector(2, 1), random_unit_vector(2, 1)};
  const auto cmp = compare_runs(configs, targets);
  ASSERT_EQ(cmp.runs.size(), 2u);
  EXPECT_EQ(cmp.runs[1].size(), 2u);
  EXPECT_EQ(cmp.rows(), cmp.runs[0].size());
  EXPECT_EQ(code_of([&] { compare_runs(configs, std::span<const CVector>(targets.data(), 1)); }),
            Errc::CountMismatch);
}
