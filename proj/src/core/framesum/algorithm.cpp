#include "framesum/algorithm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "framesum/errors.hpp"

namespace framesum {

namespace {

constexpr double kBoundsSlack = 1e-9;

void check_bounds_for_frame(const AlgoConfig& config) {
  config.bounds_used.validate();
  const auto cert = exact_bounds(config.frame);
  const auto& used = config.bounds_used;
  if (used.lower > cert.bounds.lower * (1.0 + kBoundsSlack) || used.upper < cert.bounds.upper * (1.0 - kBoundsSlack)) {
    std::ostringstream os;
    os.precision(12);
    os << "bounds (" << used.lower << ", " << used.upper << ") are not frame bounds: the spectrum of S spans ["
       << cert.bounds.lower << ", " << cert.bounds.upper << "]";
    fail(Errc::InvalidBoundsForFrame, os.str());
  }
}

}  // namespace

AlgoRun run(const AlgoConfig& config, std::span<const Complex> target) {
  if (target.size() != config.frame.dim()) fail(Errc::DimensionMismatch, "target does not match the frame dimension");
  if (config.max_iters == 0) fail(Errc::InvalidArgument, "max_iters must be positive");
  if (config.stop_tol && !(*config.stop_tol >= 0.0)) fail(Errc::InvalidArgument, "stop_tol must be nonnegative");
  check_bounds_for_frame(config);

  const CMatrix s = frame_operator(config.frame);
  const double relax = 2.0 / (config.bounds_used.lower + config.bounds_used.upper);
  const double delta = width(config.bounds_used);
  const double phi_norm = norm(target);
  const double stop = config.stop_tol.value_or(kDefaultRelativeStop * phi_norm);

  // The error e_k = phi - psi_k obeys e_k = e_{k-1} - relax * S e_{k-1}; carrying
  // it directly keeps its relative accuracy once it falls far below ||phi||.
  CVector err(target.begin(), target.end());
  AlgoRun out;
  out.records.push_back({0, phi_norm, phi_norm});
  double envelope = phi_norm;
  for (std::size_t k = 1; k <= config.max_iters && out.records.back().error > stop; ++k) {
    const CVector se = s.apply(err);
    for (std::size_t i = 0; i < err.size(); ++i) err[i] -= relax * se[i];
    envelope *= delta;
    out.records.push_back({k, norm(err), envelope});
  }
  out.iterate.resize(target.size());
  for (std::size_t i = 0; i < err.size(); ++i) out.iterate[i] = target[i] - err[i];
  return out;
}

std::size_t RunComparison::rows() const {
  std::size_t n = 0;
  for (const auto& r : runs) n = std::max(n, r.size());
  return n;
}

RunComparison compare_runs(std::span<const AlgoConfig> configs, std::span<const CVector> targets) {
  if (configs.size() != targets.size()) fail(Errc::CountMismatch, "one target per configuration is required");
  RunComparison out;
  out.runs.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) out.runs.push_back(run(configs[i], targets[i]).records);
  return out;
}

std::string render_width4(double width) {
  if (!(width >= 0.0) || !std::isfinite(width)) fail(Errc::InvalidArgument, "width must be finite and nonnegative");
  // The epsilon keeps exact four-digit values (0.75 computed as 0.7499999...) intact.
  const auto q = static_cast<long long>(std::floor(width * 1e4 + 1e-9));
  char buf[48];
  std::snprintf(buf, sizeof buf, "%lld.%04lld", q / 10000, q % 10000);
  return buf;
}

std::vector<WidthEntry> width_report(std::span<const std::pair<std::string, FrameBounds>> bounds) {
  std::vector<WidthEntry> out;
  out.reserve(bounds.size());
  for (const auto& [label, b] : bounds) {
    const double w = width(b);
    out.push_back({label, w, render_width4(w)});
  }
  return out;
}

}  // namespace framesum
