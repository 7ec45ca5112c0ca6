#pragma once

// Experiment definitions: one JSON document per experiment. Complex scalars
// are [re, im] (a bare number is read as real), frames are arrays of vectors,
// matrices are arrays of rows, generators are arrays of
// {lo, hi, kind: "affine" | "sqrt-affine", alpha, beta}.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "capi.hpp"

namespace fscli {

using fsw::Cx;
using fsw::Vec;
using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, std::string reason);
  const std::string& path() const noexcept { return path_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string path_;
  std::string reason_;
};

struct BoundsPair {
  double lower = 0.0;
  double upper = 0.0;
  bool operator==(const BoundsPair&) const = default;
};

struct FrameData {
  std::size_t dim = 0;
  std::vector<Vec> vectors;
  bool operator==(const FrameData&) const = default;
};

struct MatrixData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vec entries;  // row-major
  bool operator==(const MatrixData&) const = default;
};

struct PieceData {
  double lo = 0.0;
  double hi = 0.0;
  bool sqrt_affine = false;
  double alpha = 0.0;
  double beta = 0.0;
  bool operator==(const PieceData&) const = default;
};

struct BoundsSpec {
  FrameData frame;
  std::optional<BoundsPair> stated;
  bool operator==(const BoundsSpec&) const = default;
};

struct DualSpec {
  FrameData frame;
  FrameData dual;
  std::optional<BoundsPair> stated_frame;
  std::optional<BoundsPair> stated_dual;
  std::size_t trials = 16;
  bool operator==(const DualSpec&) const = default;
};

struct FiniteSumSpec {
  std::vector<FrameData> frames;
  Vec coefficients;
  std::optional<std::size_t> pivot;  // one-based; absent = best over all pivots
  std::optional<std::vector<BoundsPair>> stated;
  bool operator==(const FiniteSumSpec&) const = default;
};

struct OperatorSumSpec {
  FrameData frame1;
  FrameData frame2;
  MatrixData theta1;
  MatrixData theta2;
  std::optional<BoundsPair> stated1;
  std::optional<BoundsPair> stated2;
  std::optional<double> m1, m2, norm1, norm2;
  bool operator==(const OperatorSumSpec&) const = default;
};

struct PerturbedSumSpec {
  FrameData frame1;
  FrameData frame2;
  Vec alpha;
  Vec beta;
  std::optional<BoundsPair> stated1;
  std::optional<BoundsPair> stated2;
  bool operator==(const PerturbedSumSpec&) const = default;
};

struct WHData {
  double P = 1.0;
  double Q = 0.0;
  double p0 = 0.0;
  double q0 = 0.0;
  bool operator==(const WHData&) const = default;
};

struct GaborSpec {
  std::vector<PieceData> generator;
  std::optional<BoundsPair> lattice;  // (a, b); derived from wh when absent
  std::optional<WHData> wh;
  std::optional<BoundsPair> stated;
  bool operator==(const GaborSpec&) const = default;
};

struct SumRef {
  std::vector<std::string> of;
  Vec coefficients;
  bool operator==(const SumRef&) const = default;
};

struct AlgoRunSpec {
  std::string label;
  std::variant<std::string, SumRef> frame;  // named frame or weighted sum of named frames
  std::optional<BoundsPair> bounds;         // absent = oracle bounds
  bool operator==(const AlgoRunSpec&) const = default;
};

struct AlgoSpec {
  std::map<std::string, FrameData> frames;
  std::vector<AlgoRunSpec> runs;
  std::size_t max_iters = 50;
  std::optional<double> stop_tol;  // absolute; absent = 1e-12 * ||phi||
  bool operator==(const AlgoSpec&) const = default;
};

struct WidthEntrySpec {
  std::string label;
  BoundsPair bounds;
  bool operator==(const WidthEntrySpec&) const = default;
};

struct WidthSpec {
  std::vector<WidthEntrySpec> entries;
  bool operator==(const WidthSpec&) const = default;
};

using Payload = std::variant<BoundsSpec, DualSpec, FiniteSumSpec, OperatorSumSpec, PerturbedSumSpec, GaborSpec, AlgoSpec,
                             WidthSpec>;

struct ExperimentSpec {
  std::string kind;  // bounds | dual | finite-sum | operator-sum | perturbed-sum | gabor | algo | width
  std::string name;
  std::string description;
  Payload payload;
  Json expected = Json::object();        // dotted result path -> value
  std::optional<std::string> discrepancy;  // documented disagreement with the stated values
  bool operator==(const ExperimentSpec&) const = default;
};

/// Command name on the command line for a spec kind ("finite-sum" -> "sum").
std::string command_for_kind(const std::string& kind);

ExperimentSpec parse_spec_text(const std::string& text);
/// Throws std::runtime_error when the file cannot be read.
ExperimentSpec parse_spec(const std::string& path);

Json spec_to_json(const ExperimentSpec& spec);
/// Canonical JSON text; parse_spec_text(render_spec(s)) == s.
std::string render_spec(const ExperimentSpec& spec);

}  // namespace fscli
