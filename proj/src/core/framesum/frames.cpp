#include "framesum/frames.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "framesum/errors.hpp"

namespace framesum {

FiniteFrame::FiniteFrame(std::size_t dim, std::vector<CVector> vectors) : dim_(dim), vectors_(std::move(vectors)) {
  if (dim_ == 0) fail(Errc::InvalidArgument, "frame dimension must be positive");
  if (vectors_.empty()) fail(Errc::InvalidArgument, "frame must contain at least one vector");
  bool any_nonzero = false;
  for (std::size_t k = 0; k < vectors_.size(); ++k) {
    if (vectors_[k].size() != dim_) {
      std::ostringstream os;
      os << "frame vector " << k << " has length " << vectors_[k].size() << ", expected " << dim_;
      fail(Errc::DimensionMismatch, os.str());
    }
    for (const auto& z : vectors_[k]) {
      checked_complex(z.real(), z.imag());
      any_nonzero = any_nonzero || z != Complex{};
    }
  }
  if (!any_nonzero) fail(Errc::NotAFrame, "every vector of the family is zero");
}

FiniteFrame FiniteFrame::scaled(Complex c) const {
  auto out = vectors_;
  for (auto& v : out)
    for (auto& z : v) z *= c;
  return FiniteFrame(dim_, std::move(out));
}

void FrameBounds::validate() const {
  if (!(std::isfinite(lower) && std::isfinite(upper) && lower > 0.0 && lower <= upper)) {
    std::ostringstream os;
    os << "invalid frame bounds (" << lower << ", " << upper << "): need 0 < A <= B < inf";
    fail(Errc::InvalidBounds, os.str());
  }
}

CMatrix frame_operator(const FiniteFrame& frame) {
  const std::size_t d = frame.dim();
  CMatrix s(d, d);
  for (const auto& f : frame.vectors())
    for (std::size_t i = 0; i < d; ++i) {
      if (f[i] == Complex{}) continue;
      for (std::size_t j = 0; j < d; ++j) s(i, j) += f[i] * std::conj(f[j]);
    }
  return s;
}

CVector analysis(const FiniteFrame& frame, std::span<const Complex> f) {
  if (f.size() != frame.dim()) fail(Errc::DimensionMismatch, "analysed vector does not match the frame dimension");
  CVector out;
  out.reserve(frame.size());
  for (const auto& fk : frame.vectors()) out.push_back(inner(f, fk));
  return out;
}

CVector synthesis(const FiniteFrame& frame, std::span<const Complex> coefficients) {
  if (coefficients.size() != frame.size()) fail(Errc::CountMismatch, "coefficient count differs from frame size");
  CVector out(frame.dim());
  for (std::size_t k = 0; k < frame.size(); ++k)
    for (std::size_t i = 0; i < frame.dim(); ++i) out[i] += coefficients[k] * frame[k][i];
  return out;
}

double width(const FrameBounds& bounds) {
  bounds.validate();
  return (bounds.upper - bounds.lower) / (bounds.upper + bounds.lower);
}

FrameCertificate exact_bounds(const FiniteFrame& frame) {
  const auto eig = hermitian_eig(frame_operator(frame));
  const double lo = eig.eigenvalues.front();
  const double hi = eig.eigenvalues.back();
  if (!(hi > 0.0) || lo <= tol::kRank * hi) {
    std::ostringstream os;
    os << "family does not span C^" << frame.dim() << ": lambda_min(S) = " << lo << ", lambda_max(S) = " << hi;
    fail(Errc::NotAFrame, os.str());
  }
  FrameCertificate cert;
  cert.bounds = {lo, hi};
  cert.width = width(cert.bounds);
  cert.is_tight = cert.width <= tol::kTightness;
  cert.is_parseval = cert.is_tight && std::abs(hi - 1.0) <= tol::kTightness && std::abs(lo - 1.0) <= tol::kTightness;
  return cert;
}

FiniteFrame canonical_dual(const FiniteFrame& frame) {
  exact_bounds(frame);
  const CMatrix s_inv = inverse_hpd(frame_operator(frame));
  std::vector<CVector> dual;
  dual.reserve(frame.size());
  for (const auto& f : frame.vectors()) dual.push_back(s_inv.apply(f));
  return FiniteFrame(frame.dim(), std::move(dual));
}

namespace {

CVector draw_unit_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(dim);
  double n = 0.0;
  while (n == 0.0) {
    for (auto& z : v) z = {gauss(rng), gauss(rng)};
    n = norm(v);
  }
  for (auto& z : v) z /= n;
  return v;
}

}  // namespace

CVector random_unit_vector(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) fail(Errc::InvalidArgument, "dimension must be positive");
  std::mt19937_64 rng(seed);
  return draw_unit_vector(dim, rng);
}

DualCheck verify_dual(const FiniteFrame& frame, const FiniteFrame& candidate, std::size_t trials,
                      std::uint64_t seed) {
  if (frame.dim() != candidate.dim()) fail(Errc::DimensionMismatch, "dual candidate lives in a different dimension");
  if (frame.size() != candidate.size()) fail(Errc::CountMismatch, "dual candidate has a different number of vectors");
  if (trials == 0) fail(Errc::InvalidArgument, "verify_dual needs at least one trial");

  std::mt19937_64 rng(seed);
  DualCheck out;
  for (std::size_t t = 0; t < trials; ++t) {
    const CVector f = draw_unit_vector(frame.dim(), rng);
    CVector r = synthesis(candidate, analysis(frame, f));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= f[i];
    out.max_residual = std::max(out.max_residual, norm(r));
  }
  out.is_dual = out.max_residual <= tol::kDualResidual;
  return out;
}

CVector tight_reconstruct(const FiniteFrame& frame, double tight_bound, std::span<const Complex> f) {
  if (f.size() != frame.dim()) fail(Errc::DimensionMismatch, "vector does not match the frame dimension");
  const auto cert = exact_bounds(frame);
  if (!cert.is_tight) {
    std::ostringstream os;
    os << "frame is not tight: exact bounds (" << cert.bounds.lower << ", " << cert.bounds.upper << ")";
    fail(Errc::NotTight, os.str());
  }
  if (!(tight_bound > 0.0) ||
      std::abs(tight_bound - cert.bounds.upper) > tol::kTightness * cert.bounds.upper) {
    std::ostringstream os;
    os << "frame is " << cert.bounds.upper << "-tight, not " << tight_bound << "-tight";
    fail(Errc::NotTight, os.str());
  }
  CVector out = synthesis(frame, analysis(frame, f));
  for (auto& z : out) z /= tight_bound;
  return out;
}

}  // namespace framesum
