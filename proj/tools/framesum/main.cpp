#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "experiment.hpp"
#include "spec.hpp"

#ifndef FRAMESUM_FIXTURE_DIR
#define FRAMESUM_FIXTURE_DIR "fixtures"
#endif

namespace {

struct Args {
  std::string spec;
  std::string csv;
  std::uint64_t seed = 0;
  bool json = false;
  std::string fixtures = FRAMESUM_FIXTURE_DIR;
  std::string out = "framesum-out";
};

int run_single(const std::string& command, const Args& a) {
  using namespace fscli;
  ExperimentSpec spec;
  try {
    spec = parse_spec(a.spec);
  } catch (const ParseError& e) {
    std::cerr << "framesum: " << a.spec << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const SchemaError& e) {
    std::cerr << "framesum: " << a.spec << ": schema error at " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "framesum: " << e.what() << "\n";
    return kExitUsage;
  }
  if (command_for_kind(spec.kind) != command) {
    std::cerr << "framesum: " << a.spec << " is a '" << spec.kind << "' experiment; run it with 'framesum "
              << command_for_kind(spec.kind) << "'\n";
    return kExitUsage;
  }

  const auto outcome = run_experiment(spec, RunOptions{a.seed});
  std::cout << (a.json ? render_json(outcome.result) : render_text(outcome.result));
  if (!a.csv.empty()) {
    if (!outcome.series) {
      std::cerr << "framesum: --csv is only meaningful for algo experiments\n";
      return kExitUsage;
    }
    try {
      emit_csv(*outcome.series, a.csv);
    } catch (const std::exception& e) {
      std::cerr << "framesum: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  return outcome.exit_code;
}

int run_paper_suite(const Args& a) {
  try {
    const auto suite = fscli::run_suite(a.fixtures, a.out, fscli::RunOptions{a.seed}, a.json);
    std::cout << suite.table;
    return suite.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "framesum: " << e.what() << "\n";
    return fscli::kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame bounds for sums of frames: oracle, predictors, certification and the frame algorithm"};
  app.require_subcommand(1);
  Args args;

  const char* commands[][2] = {
      {"bounds", "exact bounds and width of a finite frame"},
      {"dual", "verify a dual pair, predict and certify the bounds of F + G"},
      {"sum", "weighted finite sum c_1 F_1 + ... + c_k F_k"},
      {"op-sum", "operator sum T1 F + T2 G"},
      {"perturbed-sum", "scalar-perturbed sum alpha_k f_k + beta_k g_k"},
      {"gabor", "Gabor bounds of a piecewise generator"},
      {"algo", "run the frame algorithm and report its error envelope"},
      {"width", "frame widths of bound pairs"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--spec", args.spec, "experiment definition (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--csv", args.csv, "write the convergence table here (algo)");
    sub->add_option("--seed", args.seed, "seed for random targets and test vectors")->capture_default_str();
    sub->add_flag("--json", args.json, "machine-readable report");
    sub->final_callback([&args, cmd = std::string(name)] { throw CLI::RuntimeError(run_single(cmd, args)); });
  }
  auto* suite = app.add_subcommand("paper-suite", "run every bundled fixture and print a pass/flagged table");
  suite->add_option("--fixtures", args.fixtures, "fixture directory")->capture_default_str();
  suite->add_option("--out", args.out, "directory for reports and CSVs")->capture_default_str();
  suite->add_option("--seed", args.seed, "seed for random targets and test vectors")->capture_default_str();
  suite->add_flag("--json", args.json, "write JSON reports instead of text");
  suite->final_callback([&args] { throw CLI::RuntimeError(run_paper_suite(args)); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fscli::kExitUsage;
  }
  return 0;
}
