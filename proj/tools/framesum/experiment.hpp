#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "capi.hpp"
#include "spec.hpp"

namespace fscli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitFailed = 2 };

struct RunOptions {
  std::uint64_t seed = 0;
};

/// One column pair (err_<label>, env_<label>) of the convergence table.
struct Series {
  std::string label;
  std::vector<fs_record> records;
};

struct Outcome {
  int exit_code = kExitOk;
  Json result;  // mirrors the text report; written verbatim with --json
  std::optional<std::vector<Series>> series;  // algo experiments only
};

Outcome run_experiment(const ExperimentSpec& spec, const RunOptions& options);

std::string render_text(const Json& result);
std::string render_json(const Json& result);

/// Header "k,err_<a>,env_<a>,..." then one row per k, 12 significant digits,
/// LF line endings. Shorter series leave their cells empty.
std::string render_csv(const std::vector<Series>& series);
/// Throws std::runtime_error on I/O failure.
void emit_csv(const std::vector<Series>& series, const std::string& path);

/// Compares `expected` (dotted result path -> value) with a result document.
/// Numbers match within 1e-9 relative (1e-12 absolute floor).
std::vector<std::string> check_expectations(const Json& expected, const Json& result);

struct SuiteEntry {
  std::string file;
  std::string name;
  std::string kind;
  std::string status;  // PASS | FLAGGED | FAIL
  std::string detail;
};

struct SuiteResult {
  std::vector<SuiteEntry> entries;
  std::string table;
  int exit_code = kExitOk;
};

/// Runs every *.json fixture in `fixtures_dir` (sorted by file name), writes
/// <stem>.txt or <stem>.json reports and <stem>.csv tables into `out_dir`,
/// plus suite.txt with the summary table.
SuiteResult run_suite(const std::string& fixtures_dir, const std::string& out_dir, const RunOptions& options,
                      bool json_reports);

}  // namespace fscli
