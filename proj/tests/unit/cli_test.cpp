#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "experiment.hpp"
#include "spec.hpp"

using namespace fscli;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = FRAMESUM_TEST_FIXTURE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<fs::path> fixtures() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kFixtures))
    if (e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("framesum_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Spec, ExfalFixtureIsAWeightedSum) {
  const auto s = parse_spec((kFixtures / "exfal.json").string());
  EXPECT_EQ(s.kind, "finite-sum");
  EXPECT_EQ(command_for_kind(s.kind), "sum");
  const auto& p = std::get<FiniteSumSpec>(s.payload);
  ASSERT_EQ(p.coefficients.size(), 2u);
  EXPECT_EQ(p.coefficients[0], Cx(1.0));
  EXPECT_EQ(p.coefficients[1], Cx(100.0));
  EXPECT_EQ(p.frames[0].dim, 2u);
  EXPECT_EQ(p.pivot, std::optional<std::size_t>(1));
  EXPECT_TRUE(s.discrepancy.has_value());
}

TEST(Spec, EmptyDocumentIsAParseError) {
  try {
    parse_spec_text("");
    FAIL() << "no ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Spec, ParseErrorReportsLineAndColumn) {
  try {
    parse_spec_text("{\n  \"kind\": \"bounds\",\n  \"frame\": [[1, 0]],,\n}");
    FAIL() << "no ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(Spec, ZeroCoefficientIsASchemaError) {
  try {
    parse_spec_text(R"({"kind": "finite-sum", "frames": [[[1, 0]], [[0, 1]]], "coefficients": [[1, 0], [0, 0]]})");
    FAIL() << "no SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), "coefficients[1]");
    EXPECT_EQ(e.reason(), "coefficient must be nonzero");
  }
}

TEST(Spec, SchemaErrorsCarryFieldPaths) {
  auto path_of = [](const std::string& text) {
    try {
      parse_spec_text(text);
    } catch (const SchemaError& e) {
      return e.path();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(path_of(R"({"kind": "nope"})"), "kind");
  EXPECT_EQ(path_of(R"({"kind": "bounds", "frame": [[1, 0], [1]]})"), "frame[1]");
  EXPECT_EQ(path_of(R"({"kind": "bounds", "frame": [[1, "x"]]})"), "frame[0][1]");
  EXPECT_EQ(path_of(R"({"kind": "bounds", "frame": [[1]], "stated": [2, 1]})"), "stated");
  EXPECT_EQ(path_of(R"({"kind": "gabor", "generator": [{"lo": 0, "hi": 1, "kind": "cubic", "alpha": 1, "beta": 0}],
                       "lattice": {"a": 1, "b": 1}})"),
            "generator[0].kind");
  EXPECT_EQ(path_of(R"({"kind": "algo", "frames": {"F": [[1]]}, "runs": [{"label": "x", "frame": "G"}]})"),
            "runs[0].frame");
}

TEST(Spec, ComplexValuesAcceptPairsAndBareNumbers) {
  const auto s = parse_spec_text(R"({"kind": "bounds", "frame": [[[0, 1], 2]]})");
  const auto& f = std::get<BoundsSpec>(s.payload).frame;
  EXPECT_EQ(f.vectors[0][0], Cx(0.0, 1.0));
  EXPECT_EQ(f.vectors[0][1], Cx(2.0, 0.0));
}

TEST(Spec, RoundTripForEveryFixture) {
  for (const auto& p : fixtures()) {
    const auto s = parse_spec(p.string());
    const auto text = render_spec(s);
    EXPECT_EQ(parse_spec_text(text), s) << p.filename();
    EXPECT_EQ(render_spec(parse_spec_text(text)), text) << p.filename();
  }
}

TEST(Experiment, ExfalReportsBothPredictionsAndExitsZero) {
  const auto s = parse_spec((kFixtures / "exfal.json").string());
  const auto out = run_experiment(s, {});
  EXPECT_EQ(out.exit_code, kExitOk);
  const auto& r = out.result;
  EXPECT_EQ(r["stated"]["certification"]["predicted"]["lower"].get<double>(), 87604.0);
  EXPECT_EQ(r["stated"]["certification"]["predicted"]["upper"].get<double>(), 180032.0);
  EXPECT_EQ(r["stated"]["predicted_width4"], "0.3453");
  EXPECT_EQ(r["inputs"][0]["exact"]["width4"], "0.6000");
  EXPECT_FALSE(r["stated"]["certification"]["certified"].get<bool>());
  EXPECT_TRUE(r["certification"]["certified"].get<bool>());
  EXPECT_EQ(r["notes"].size(), 2u);
  const auto text = render_text(r);
  EXPECT_NE(text.find("87604"), std::string::npos);
  EXPECT_NE(text.find("0.3453"), std::string::npos);
}

TEST(Experiment, FailedConditionExitsTwoWithMargin) {
  const auto s = parse_spec_text(
      R"({"kind": "finite-sum", "frames": [[[1, 0], [0, 1]], [[1, 0], [0, 1]]], "coefficients": [1, 1], "pivot": 1})");
  const auto out = run_experiment(s, {});
  EXPECT_EQ(out.exit_code, kExitFailed);
  EXPECT_EQ(out.result["status"], "condition-failed");
  const auto why = out.result["certification"]["explanation"].get<std::string>();
  EXPECT_NE(why.find("margin 0"), std::string::npos) << why;
}

TEST(Experiment, NotADualExitsTwo) {
  const auto s = parse_spec_text(
      R"({"kind": "dual", "frame": [[1, 0], [0, 1]], "dual": [[2, 0], [0, 1]]})");
  const auto out = run_experiment(s, {});
  EXPECT_EQ(out.exit_code, kExitFailed);
  EXPECT_EQ(out.result["status"], "not-dual");
}

TEST(Experiment, InputErrorsExitOne) {
  const auto s = parse_spec_text(R"({"kind": "perturbed-sum", "frame1": [[1, 0], [0, 1]], "frame2": [[1, 0], [0, 1]],
                                     "alpha": [1], "beta": [1, 1]})");
  const auto out = run_experiment(s, {});
  EXPECT_EQ(out.exit_code, kExitUsage);
  EXPECT_EQ(out.result["error"]["code"], "AlignmentMismatch");
}

TEST(Experiment, NonSpanningFrameExitsTwo) {
  const auto out = run_experiment(parse_spec_text(R"({"kind": "bounds", "frame": [[1, 0], [2, 0]]})"), {});
  EXPECT_EQ(out.exit_code, kExitFailed);
  EXPECT_EQ(out.result["error"]["code"], "NotAFrame");
}

TEST(Experiment, GaborWithoutPositiveLowerBoundExitsTwo) {
  const auto out = run_experiment(
      parse_spec_text(R"({"kind": "gabor", "generator": [{"lo": 0, "hi": 1, "kind": "affine", "alpha": 0, "beta": 1}],
                          "lattice": {"a": 2, "b": 0.5}})"),
      {});
  EXPECT_EQ(out.exit_code, kExitFailed);
  EXPECT_EQ(out.result["status"], "no-frame-conclusion");
}

TEST(Experiment, AlgoRejectsBoundsThatAreNotFrameBounds) {
  const auto out = run_experiment(
      parse_spec_text(R"({"kind": "algo", "frames": {"F": [[2, 0], [0, 1]]},
                          "runs": [{"label": "F", "frame": "F", "bounds": [2, 4]}]})"),
      {});
  EXPECT_EQ(out.exit_code, kExitFailed);
  EXPECT_NE(out.result["runs"][0]["rejected"].get<std::string>().find("InvalidBoundsForFrame"), std::string::npos);
}

TEST(Csv, DualexaalgoColumns) {
  const auto out = run_experiment(parse_spec((kFixtures / "dualexaalgo_algo.json").string()), {});
  ASSERT_TRUE(out.series);
  const auto csv = render_csv(*out.series);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,err_F,env_F,err_G,env_G,err_sum,env_sum");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.back(), '\n');
}

TEST(Csv, ExfalFirstRowEnvelope) {
  const auto out = run_experiment(parse_spec((kFixtures / "exfal_algo.json").string()), {});
  const auto csv = render_csv(*out.series);
  std::istringstream in(csv);
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  EXPECT_EQ(header, "k,err_F,env_F,err_sum,env_sum,err_sum_oracle,env_sum_oracle");
  EXPECT_EQ(row1.substr(0, row1.find(',', 2)), "1,0.6");  // err_F(1) for a unit target
  EXPECT_NE(row1.find(",0.6,"), std::string::npos);       // env_F(1)
}

TEST(Csv, TightFrameRowsAndEmptyInput) {
  const auto out = run_experiment(
      parse_spec_text(R"({"kind": "algo", "frames": {"T": [[1, 0], [0, 1]]},
                          "runs": [{"label": "T", "frame": "T", "bounds": "oracle"}]})"),
      {});
  const auto csv = render_csv(*out.series);
  EXPECT_EQ(csv, "k,err_T,env_T\n0,1,1\n1,0,0\n");
  EXPECT_EQ(render_csv({}), "k\n");
}

TEST(Csv, EmitWritesFileAndReportsIoErrors) {
  const auto dir = scratch("emit");
  emit_csv({}, (dir / "a.csv").string());
  EXPECT_EQ(slurp(dir / "a.csv"), "k\n");
  EXPECT_THROW(emit_csv({}, (dir / "missing" / "a.csv").string()), std::runtime_error);
}

TEST(Expectations, NumericToleranceAndPaths) {
  const Json result = Json::parse(R"({"a": {"b": [1.0, {"c": 2.5}]}, "s": "0.3453"})");
  EXPECT_TRUE(check_expectations(Json::parse(R"({"a.b[1].c": 2.5000000001, "s": "0.3453"})"), result).empty());
  EXPECT_EQ(check_expectations(Json::parse(R"({"a.b[1].c": 2.6})"), result).size(), 1u);
  EXPECT_EQ(check_expectations(Json::parse(R"({"a.x": 1})"), result).size(), 1u);
  EXPECT_EQ(check_expectations(Json::parse(R"({"a.b": [1, {"c": 2.5}]})"), result).size(), 0u);
}

TEST(Determinism, SameSeedSameBytes) {
  for (const auto& p : fixtures()) {
    const auto s = parse_spec(p.string());
    const auto a = run_experiment(s, {7});
    const auto b = run_experiment(s, {7});
    EXPECT_EQ(render_text(a.result), render_text(b.result)) << p.filename();
    EXPECT_EQ(render_json(a.result), render_json(b.result)) << p.filename();
    if (a.series) EXPECT_EQ(render_csv(*a.series), render_csv(*b.series));
  }
}

TEST(Suite, EveryFixtureMeetsItsExpectations) {
  const auto dir = scratch("suite");
  const auto suite = run_suite(kFixtures.string(), dir.string(), {}, false);
  EXPECT_EQ(suite.exit_code, kExitOk) << suite.table;
  for (const auto& e : suite.entries) EXPECT_NE(e.status, "FAIL") << e.name << ": " << e.detail;
  EXPECT_TRUE(fs::exists(dir / "suite.txt"));
  EXPECT_TRUE(fs::exists(dir / "dualexaalgo_algo.csv"));
}

TEST(Experiment, ThreeFrameSumsCarryACaveat) {
  const auto out = run_experiment(
      parse_spec_text(R"({"kind": "finite-sum", "frames": [[[1], [0]], [[0], [1]], [[0], [1]]],
                          "coefficients": [0.1, 1, -1], "pivot": 1})"),
      {});
  EXPECT_EQ(out.exit_code, kExitFailed);
  EXPECT_EQ(out.result["status"], "not-certified");
  EXPECT_NE(render_text(out.result).find("non-pivot"), std::string::npos);
}
