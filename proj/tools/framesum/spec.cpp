#include "spec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fscli {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         what),
      line_(line),
      column_(column) {}

SchemaError::SchemaError(std::string path, std::string reason)
    : std::runtime_error(path + ": " + reason), path_(std::move(path)), reason_(std::move(reason)) {}

namespace {

const std::vector<std::string> kKinds{"bounds",        "dual",  "finite-sum", "operator-sum",
                                      "perturbed-sum", "gabor", "algo",       "width"};

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw SchemaError(join(path, key), "required field is missing");
  return obj.at(key);
}

void need_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "$" : path, "expected an object");
}

void need_array(const Json& j, const std::string& path, bool nonempty = true) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  if (nonempty && j.empty()) throw SchemaError(path, "array must not be empty");
}

double real_value(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path, "number must be finite");
  return v;
}

std::string string_value(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

std::size_t count_value(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) throw SchemaError(path, "expected a positive integer");
  return j.get<std::size_t>();
}

Cx complex_value(const Json& j, const std::string& path) {
  if (j.is_number()) return {real_value(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) throw SchemaError(path, "complex scalar must be [re, im]");
  return {real_value(j[0], index(path, 0)), real_value(j[1], index(path, 1))};
}

Vec complex_list(const Json& j, const std::string& path) {
  need_array(j, path);
  Vec out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_value(j[i], index(path, i)));
  return out;
}

BoundsPair bounds_value(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(path, "bounds must be [lower, upper]");
  BoundsPair b{real_value(j[0], index(path, 0)), real_value(j[1], index(path, 1))};
  if (!(b.lower > 0.0 && b.lower <= b.upper)) throw SchemaError(path, "bounds need 0 < lower <= upper");
  return b;
}

std::optional<BoundsPair> optional_bounds(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return bounds_value(obj.at(key), join(path, key));
}

std::optional<double> optional_real(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return real_value(obj.at(key), join(path, key));
}

FrameData frame_value(const Json& j, const std::string& path) {
  need_array(j, path);
  FrameData f;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto p = index(path, k);
    auto v = complex_list(j[k], p);
    if (k == 0) f.dim = v.size();
    if (v.size() != f.dim) {
      throw SchemaError(p, "vector has length " + std::to_string(v.size()) + ", expected " + std::to_string(f.dim));
    }
    f.vectors.push_back(std::move(v));
  }
  return f;
}

MatrixData matrix_value(const Json& j, const std::string& path) {
  need_array(j, path);
  MatrixData m;
  m.rows = j.size();
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto p = index(path, r);
    auto row = complex_list(j[r], p);
    if (r == 0) m.cols = row.size();
    if (row.size() != m.cols) throw SchemaError(p, "rows must all have the same length");
    m.entries.insert(m.entries.end(), row.begin(), row.end());
  }
  return m;
}

PieceData piece_value(const Json& j, const std::string& path) {
  need_object(j, path);
  PieceData p;
  p.lo = real_value(field(j, "lo", path), join(path, "lo"));
  p.hi = real_value(field(j, "hi", path), join(path, "hi"));
  const auto kind = string_value(field(j, "kind", path), join(path, "kind"));
  if (kind == "sqrt-affine") {
    p.sqrt_affine = true;
  } else if (kind != "affine") {
    throw SchemaError(join(path, "kind"), "must be \"affine\" or \"sqrt-affine\"");
  }
  p.alpha = real_value(field(j, "alpha", path), join(path, "alpha"));
  p.beta = real_value(field(j, "beta", path), join(path, "beta"));
  if (!(p.lo < p.hi)) throw SchemaError(path, "piece needs lo < hi");
  return p;
}

void nonzero_coefficients(const Vec& c, const std::string& path) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] == Cx{}) throw SchemaError(index(path, i), "coefficient must be nonzero");
}

BoundsSpec parse_bounds(const Json& j) { return {frame_value(field(j, "frame", ""), "frame"), optional_bounds(j, "stated", "")}; }

DualSpec parse_dual(const Json& j) {
  DualSpec s;
  s.frame = frame_value(field(j, "frame", ""), "frame");
  s.dual = frame_value(field(j, "dual", ""), "dual");
  s.stated_frame = optional_bounds(j, "stated_frame", "");
  s.stated_dual = optional_bounds(j, "stated_dual", "");
  if (j.contains("trials")) s.trials = count_value(j.at("trials"), "trials");
  return s;
}

FiniteSumSpec parse_finite_sum(const Json& j) {
  FiniteSumSpec s;
  const auto& frames = field(j, "frames", "");
  need_array(frames, "frames");
  for (std::size_t i = 0; i < frames.size(); ++i) s.frames.push_back(frame_value(frames[i], index("frames", i)));
  s.coefficients = complex_list(field(j, "coefficients", ""), "coefficients");
  nonzero_coefficients(s.coefficients, "coefficients");
  if (s.coefficients.size() != s.frames.size()) throw SchemaError("coefficients", "need one coefficient per frame");
  if (j.contains("pivot") && !j.at("pivot").is_null()) {
    const auto p = count_value(j.at("pivot"), "pivot");
    if (p > s.frames.size()) throw SchemaError("pivot", "pivot must lie in 1..k");
    s.pivot = p;
  }
  if (j.contains("stated") && !j.at("stated").is_null()) {
    const auto& st = j.at("stated");
    need_array(st, "stated");
    std::vector<BoundsPair> b;
    for (std::size_t i = 0; i < st.size(); ++i) b.push_back(bounds_value(st[i], index("stated", i)));
    if (b.size() != s.frames.size()) throw SchemaError("stated", "need one bounds pair per frame");
    s.stated = std::move(b);
  }
  return s;
}

OperatorSumSpec parse_operator_sum(const Json& j) {
  OperatorSumSpec s;
  s.frame1 = frame_value(field(j, "frame1", ""), "frame1");
  s.frame2 = frame_value(field(j, "frame2", ""), "frame2");
  s.theta1 = matrix_value(field(j, "theta1", ""), "theta1");
  s.theta2 = matrix_value(field(j, "theta2", ""), "theta2");
  s.stated1 = optional_bounds(j, "stated1", "");
  s.stated2 = optional_bounds(j, "stated2", "");
  s.m1 = optional_real(j, "m1", "");
  s.m2 = optional_real(j, "m2", "");
  s.norm1 = optional_real(j, "norm1", "");
  s.norm2 = optional_real(j, "norm2", "");
  return s;
}

PerturbedSumSpec parse_perturbed_sum(const Json& j) {
  PerturbedSumSpec s;
  s.frame1 = frame_value(field(j, "frame1", ""), "frame1");
  s.frame2 = frame_value(field(j, "frame2", ""), "frame2");
  s.alpha = complex_list(field(j, "alpha", ""), "alpha");
  s.beta = complex_list(field(j, "beta", ""), "beta");
  s.stated1 = optional_bounds(j, "stated1", "");
  s.stated2 = optional_bounds(j, "stated2", "");
  return s;
}

GaborSpec parse_gabor(const Json& j) {
  GaborSpec s;
  const auto& gen = field(j, "generator", "");
  need_array(gen, "generator");
  for (std::size_t i = 0; i < gen.size(); ++i) s.generator.push_back(piece_value(gen[i], index("generator", i)));
  if (j.contains("lattice") && !j.at("lattice").is_null()) {
    const auto& l = j.at("lattice");
    need_object(l, "lattice");
    s.lattice = BoundsPair{real_value(field(l, "a", "lattice"), "lattice.a"), real_value(field(l, "b", "lattice"), "lattice.b")};
    if (!(s.lattice->lower > 0.0 && s.lattice->upper > 0.0)) throw SchemaError("lattice", "a and b must be positive");
  }
  if (j.contains("wh") && !j.at("wh").is_null()) {
    const auto& w = j.at("wh");
    need_object(w, "wh");
    WHData d;
    d.P = real_value(field(w, "P", "wh"), "wh.P");
    d.Q = real_value(field(w, "Q", "wh"), "wh.Q");
    d.p0 = real_value(field(w, "p0", "wh"), "wh.p0");
    d.q0 = real_value(field(w, "q0", "wh"), "wh.q0");
    s.wh = d;
  }
  if (!s.lattice && !s.wh) throw SchemaError("lattice", "either lattice or wh is required");
  s.stated = optional_bounds(j, "stated", "");
  return s;
}

AlgoSpec parse_algo(const Json& j) {
  AlgoSpec s;
  const auto& frames = field(j, "frames", "");
  need_object(frames, "frames");
  if (frames.empty()) throw SchemaError("frames", "at least one named frame is required");
  for (const auto& [name, value] : frames.items()) s.frames.emplace(name, frame_value(value, join("frames", name)));

  auto known = [&](const std::string& name, const std::string& path) {
    if (!s.frames.count(name)) throw SchemaError(path, "unknown frame \"" + name + "\"");
    return name;
  };

  const auto& runs = field(j, "runs", "");
  need_array(runs, "runs");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto p = index("runs", i);
    const auto& r = runs[i];
    need_object(r, p);
    AlgoRunSpec run;
    run.label = string_value(field(r, "label", p), join(p, "label"));
    if (run.label.empty()) throw SchemaError(join(p, "label"), "label must not be empty");
    for (const auto& other : s.runs)
      if (other.label == run.label) throw SchemaError(join(p, "label"), "duplicate run label");
    if (r.contains("frame")) {
      run.frame = known(string_value(r.at("frame"), join(p, "frame")), join(p, "frame"));
    } else if (r.contains("sum")) {
      const auto sp = join(p, "sum");
      const auto& sj = r.at("sum");
      need_object(sj, sp);
      SumRef ref;
      const auto& of = field(sj, "of", sp);
      need_array(of, join(sp, "of"));
      for (std::size_t k = 0; k < of.size(); ++k) {
        const auto op = index(join(sp, "of"), k);
        ref.of.push_back(known(string_value(of[k], op), op));
      }
      ref.coefficients = complex_list(field(sj, "coefficients", sp), join(sp, "coefficients"));
      nonzero_coefficients(ref.coefficients, join(sp, "coefficients"));
      if (ref.coefficients.size() != ref.of.size()) throw SchemaError(sp, "need one coefficient per frame");
      run.frame = std::move(ref);
    } else {
      throw SchemaError(p, "run needs \"frame\" or \"sum\"");
    }
    if (r.contains("bounds") && !(r.at("bounds").is_string() && r.at("bounds") == "oracle")) {
      run.bounds = bounds_value(r.at("bounds"), join(p, "bounds"));
    }
    s.runs.push_back(std::move(run));
  }
  if (j.contains("max_iters")) s.max_iters = count_value(j.at("max_iters"), "max_iters");
  if (auto t = optional_real(j, "stop_tol", "")) {
    if (*t < 0.0) throw SchemaError("stop_tol", "must be nonnegative");
    s.stop_tol = t;
  }
  return s;
}

WidthSpec parse_width(const Json& j) {
  WidthSpec s;
  const auto& entries = field(j, "entries", "");
  need_array(entries, "entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto p = index("entries", i);
    need_object(entries[i], p);
    s.entries.push_back({string_value(field(entries[i], "label", p), join(p, "label")),
                         bounds_value(field(entries[i], "bounds", p), join(p, "bounds"))});
  }
  return s;
}

// ---- rendering -------------------------------------------------------------

Json complex_json(Cx z) { return Json::array({z.real(), z.imag()}); }

Json complex_list_json(const Vec& v) {
  Json out = Json::array();
  for (auto z : v) out.push_back(complex_json(z));
  return out;
}

Json bounds_json(const BoundsPair& b) { return Json::array({b.lower, b.upper}); }

Json frame_json(const FrameData& f) {
  Json out = Json::array();
  for (const auto& v : f.vectors) out.push_back(complex_list_json(v));
  return out;
}

Json matrix_json(const MatrixData& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(complex_json(m.entries[r * m.cols + c]));
    out.push_back(row);
  }
  return out;
}

void put(Json& j, const std::string& key, const std::optional<BoundsPair>& b) {
  if (b) j[key] = bounds_json(*b);
}

void put(Json& j, const std::string& key, const std::optional<double>& v) {
  if (v) j[key] = *v;
}

struct PayloadRenderer {
  Json& j;

  void operator()(const BoundsSpec& s) const {
    j["frame"] = frame_json(s.frame);
    put(j, "stated", s.stated);
  }
  void operator()(const DualSpec& s) const {
    j["frame"] = frame_json(s.frame);
    j["dual"] = frame_json(s.dual);
    put(j, "stated_frame", s.stated_frame);
    put(j, "stated_dual", s.stated_dual);
    j["trials"] = s.trials;
  }
  void operator()(const FiniteSumSpec& s) const {
    Json frames = Json::array();
    for (const auto& f : s.frames) frames.push_back(frame_json(f));
    j["frames"] = frames;
    j["coefficients"] = complex_list_json(s.coefficients);
    if (s.pivot) j["pivot"] = *s.pivot;
    if (s.stated) {
      Json st = Json::array();
      for (const auto& b : *s.stated) st.push_back(bounds_json(b));
      j["stated"] = st;
    }
  }
  void operator()(const OperatorSumSpec& s) const {
    j["frame1"] = frame_json(s.frame1);
    j["frame2"] = frame_json(s.frame2);
    j["theta1"] = matrix_json(s.theta1);
    j["theta2"] = matrix_json(s.theta2);
    put(j, "stated1", s.stated1);
    put(j, "stated2", s.stated2);
    put(j, "m1", s.m1);
    put(j, "m2", s.m2);
    put(j, "norm1", s.norm1);
    put(j, "norm2", s.norm2);
  }
  void operator()(const PerturbedSumSpec& s) const {
    j["frame1"] = frame_json(s.frame1);
    j["frame2"] = frame_json(s.frame2);
    j["alpha"] = complex_list_json(s.alpha);
    j["beta"] = complex_list_json(s.beta);
    put(j, "stated1", s.stated1);
    put(j, "stated2", s.stated2);
  }
  void operator()(const GaborSpec& s) const {
    Json gen = Json::array();
    for (const auto& p : s.generator) {
      gen.push_back(Json{{"lo", p.lo},
                         {"hi", p.hi},
                         {"kind", p.sqrt_affine ? "sqrt-affine" : "affine"},
                         {"alpha", p.alpha},
                         {"beta", p.beta}});
    }
    j["generator"] = gen;
    if (s.lattice) j["lattice"] = Json{{"a", s.lattice->lower}, {"b", s.lattice->upper}};
    if (s.wh) j["wh"] = Json{{"P", s.wh->P}, {"Q", s.wh->Q}, {"p0", s.wh->p0}, {"q0", s.wh->q0}};
    put(j, "stated", s.stated);
  }
  void operator()(const AlgoSpec& s) const {
    Json frames = Json::object();
    for (const auto& [name, f] : s.frames) frames[name] = frame_json(f);
    j["frames"] = frames;
    Json runs = Json::array();
    for (const auto& r : s.runs) {
      Json rj{{"label", r.label}};
      if (const auto* name = std::get_if<std::string>(&r.frame)) {
        rj["frame"] = *name;
      } else {
        const auto& ref = std::get<SumRef>(r.frame);
        rj["sum"] = Json{{"of", ref.of}, {"coefficients", complex_list_json(ref.coefficients)}};
      }
      rj["bounds"] = r.bounds ? bounds_json(*r.bounds) : Json("oracle");
      runs.push_back(rj);
    }
    j["runs"] = runs;
    j["max_iters"] = s.max_iters;
    put(j, "stop_tol", s.stop_tol);
  }
  void operator()(const WidthSpec& s) const {
    Json entries = Json::array();
    for (const auto& e : s.entries) entries.push_back(Json{{"label", e.label}, {"bounds", bounds_json(e.bounds)}});
    j["entries"] = entries;
  }
};

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::string command_for_kind(const std::string& kind) {
  if (kind == "finite-sum") return "sum";
  if (kind == "operator-sum") return "op-sum";
  return kind;
}

ExperimentSpec parse_spec_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ParseError(line, col, msg);
  }
  need_object(j, "");

  ExperimentSpec s;
  s.kind = string_value(field(j, "kind", ""), "kind");
  if (std::find(kKinds.begin(), kKinds.end(), s.kind) == kKinds.end()) throw SchemaError("kind", "unknown kind \"" + s.kind + "\"");
  if (j.contains("name")) s.name = string_value(j.at("name"), "name");
  if (j.contains("description")) s.description = string_value(j.at("description"), "description");
  if (j.contains("expected")) {
    need_object(j.at("expected"), "expected");
    s.expected = j.at("expected");
  }
  if (j.contains("discrepancy") && !j.at("discrepancy").is_null()) s.discrepancy = string_value(j.at("discrepancy"), "discrepancy");

  if (s.kind == "bounds") s.payload = parse_bounds(j);
  else if (s.kind == "dual") s.payload = parse_dual(j);
  else if (s.kind == "finite-sum") s.payload = parse_finite_sum(j);
  else if (s.kind == "operator-sum") s.payload = parse_operator_sum(j);
  else if (s.kind == "perturbed-sum") s.payload = parse_perturbed_sum(j);
  else if (s.kind == "gabor") s.payload = parse_gabor(j);
  else if (s.kind == "algo") s.payload = parse_algo(j);
  else s.payload = parse_width(j);
  return s;
}

ExperimentSpec parse_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

Json spec_to_json(const ExperimentSpec& spec) {
  Json j{{"kind", spec.kind}};
  if (!spec.name.empty()) j["name"] = spec.name;
  if (!spec.description.empty()) j["description"] = spec.description;
  std::visit(PayloadRenderer{j}, spec.payload);
  if (!spec.expected.empty()) j["expected"] = spec.expected;
  j["discrepancy"] = spec.discrepancy ? Json(*spec.discrepancy) : Json(nullptr);
  return j;
}

std::string render_spec(const ExperimentSpec& spec) { return spec_to_json(spec).dump(2) + "\n"; }

}  // namespace fscli
