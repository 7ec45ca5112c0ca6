#include "framesum/gabor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "framesum/errors.hpp"

namespace framesum {

namespace {

constexpr double kRadicandSlack = 1e-14;
constexpr double kSupportSlack = 1e-12;
constexpr double kBreakpointMerge = 1e-12;
constexpr int kRefineSteps = 80;

bool finite(double x) { return std::isfinite(x); }

// Quadratic c0 + c1 x + c2 x^2.
struct Quadratic {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double operator()(double x) const { return c0 + x * (c1 + x * c2); }
};

// |p(x - shift)|^2 as a polynomial in x.
Quadratic squared_piece(const Piece& p, double shift) {
  const double beta = p.beta - p.alpha * shift;
  if (p.kind == PieceKind::SqrtAffine) return {beta, p.alpha, 0.0};
  return {beta * beta, 2.0 * p.alpha * beta, p.alpha * p.alpha};
}

const Piece* find_piece(const std::vector<Piece>& pieces, double x) {
  auto it = std::upper_bound(pieces.begin(), pieces.end(), x, [](double v, const Piece& p) { return v < p.lo; });
  if (it == pieces.begin()) return nullptr;
  --it;
  return x < it->hi ? &*it : nullptr;
}

// Range of n with x - n a inside [lo, hi).
std::pair<long, long> shift_range(double lo, double hi, double a, double x) {
  return {static_cast<long>(std::floor((x - hi) / a)), static_cast<long>(std::ceil((x - lo) / a))};
}

}  // namespace

double Piece::value(double x) const {
  const double lin = alpha * x + beta;
  if (kind == PieceKind::Affine) return lin;
  return std::sqrt(std::max(lin, 0.0));
}

PiecewiseGenerator::PiecewiseGenerator(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) fail(Errc::EmptySupport, "generator has no pieces");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    std::ostringstream os;
    os << "piece " << i << " [" << p.lo << ", " << p.hi << "): ";
    if (!(finite(p.lo) && finite(p.hi) && finite(p.alpha) && finite(p.beta))) {
      fail(Errc::InvalidArgument, os.str() + "non-finite field");
    }
    if (!(p.lo < p.hi)) fail(Errc::InvalidArgument, os.str() + "needs lo < hi");
    if (i > 0 && pieces_[i - 1].hi > p.lo) fail(Errc::InvalidArgument, os.str() + "pieces must be sorted and disjoint");
    if (p.kind == PieceKind::SqrtAffine) {
      const double scale = std::abs(p.alpha) * std::max(std::abs(p.lo), std::abs(p.hi)) + std::abs(p.beta);
      const double slack = -kRadicandSlack * std::max(scale, 1.0);
      if (p.alpha * p.lo + p.beta < slack || p.alpha * p.hi + p.beta < slack) {
        fail(Errc::InvalidArgument, os.str() + "sqrt-affine radicand is negative on the piece");
      }
    }
  }
}

double PiecewiseGenerator::operator()(double x) const {
  const Piece* p = find_piece(pieces_, x);
  return p ? p->value(x) : 0.0;
}

PiecewiseGenerator PiecewiseGenerator::scaled(double c) const {
  auto out = pieces_;
  for (auto& p : out) {
    if (p.kind == PieceKind::Affine) {
      p.alpha *= c;
      p.beta *= c;
    } else {
      if (!(c > 0.0)) fail(Errc::InvalidArgument, "sqrt-affine pieces can only be scaled by c > 0");
      p.alpha *= c * c;
      p.beta *= c * c;
    }
  }
  return PiecewiseGenerator(std::move(out));
}

void LatticeParams::validate() const {
  if (!(finite(a) && finite(b) && a > 0.0 && b > 0.0)) {
    std::ostringstream os;
    os << "lattice needs finite a, b > 0 (got a = " << a << ", b = " << b << ")";
    fail(Errc::InvalidArgument, os.str());
  }
}

double g0(const PiecewiseGenerator& gen, double a, double x) {
  LatticeParams{a, 1.0}.validate();
  const auto [n_lo, n_hi] = shift_range(gen.support_lo(), gen.support_hi(), a, x);
  double s = 0.0;
  for (long n = n_lo; n <= n_hi; ++n) {
    const double v = gen(x - static_cast<double>(n) * a);
    s += v * v;
  }
  return s;
}

bool g1_vanishes(const PiecewiseGenerator& gen, const LatticeParams& lattice) {
  lattice.validate();
  return gen.support_length() * lattice.b <= 1.0 + kSupportSlack;
}

double g1(const PiecewiseGenerator& gen, const LatticeParams& lattice, double x) {
  if (g1_vanishes(gen, lattice)) return 0.0;
  const double a = lattice.a;
  const double shift = 1.0 / lattice.b;
  const long k_max = static_cast<long>(std::ceil(gen.support_length() * lattice.b)) + 1;
  const auto [n_lo, n_hi] = shift_range(gen.support_lo(), gen.support_hi(), a, x);
  double total = 0.0;
  for (long k = -k_max; k <= k_max; ++k) {
    if (k == 0) continue;
    double inner_sum = 0.0;
    for (long n = n_lo; n <= n_hi; ++n) {
      const double y = x - static_cast<double>(n) * a;
      inner_sum += gen(y) * gen(y - static_cast<double>(k) * shift);
    }
    total += std::abs(inner_sum);
  }
  return total;
}

namespace {

struct Extrema {
  double inf = 0.0;
  double sup = 0.0;
};

// G0 is a quadratic between consecutive breakpoints of the periodised pieces,
// so inf/sup over [0, a) are attained at breakpoints or interior vertices.
Extrema closed_form_g0_extrema(const PiecewiseGenerator& gen, double a) {
  const auto& pieces = gen.pieces();
  const auto [n_lo, n_hi] = shift_range(gen.support_lo(), gen.support_hi() + a, a, 0.0);

  std::vector<double> cuts{0.0, a};
  for (long n = n_lo; n <= n_hi + 1; ++n) {
    const double s = static_cast<double>(n) * a;
    for (const auto& p : pieces)
      for (double e : {p.lo + s, p.hi + s})
        if (e > 0.0 && e < a) cuts.push_back(e);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> merged;
  for (double c : cuts)
    if (merged.empty() || c - merged.back() > kBreakpointMerge * a) merged.push_back(c);
  if (merged.back() < a) merged.back() = a;

  Extrema out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    const double t0 = merged[i];
    const double t1 = merged[i + 1];
    const double mid = 0.5 * (t0 + t1);
    Quadratic q;
    for (long n = n_lo - 1; n <= n_hi + 1; ++n) {
      const double s = static_cast<double>(n) * a;
      if (const Piece* p = find_piece(pieces, mid - s)) {
        const auto term = squared_piece(*p, s);
        q.c0 += term.c0;
        q.c1 += term.c1;
        q.c2 += term.c2;
      }
    }
    std::array<double, 3> candidates{q(t0), q(t1), q(t0)};
    if (q.c2 != 0.0) {
      const double vertex = -q.c1 / (2.0 * q.c2);
      if (vertex > t0 && vertex < t1) candidates[2] = q(vertex);
    }
    for (double v : candidates) {
      out.inf = std::min(out.inf, v);
      out.sup = std::max(out.sup, v);
    }
  }
  return out;
}

// Golden-section refinement of a coarse grid extremum on [lo, hi].
template <class F>
double refine(F&& f, double lo, double hi, bool minimise) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  auto better = [&](double u, double v) { return minimise ? u < v : u > v; };
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < kRefineSteps; ++i) {
    if (better(f1, f2)) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  return better(f1, f2) ? f1 : f2;
}

Extrema grid_extrema(const PiecewiseGenerator& gen, const LatticeParams& lattice) {
  const double a = lattice.a;
  const std::size_t n = kGaborGridPoints;
  const double h = a / static_cast<double>(n);
  auto lower = [&](double x) { return g0(gen, a, x) - g1(gen, lattice, x); };
  auto upper = [&](double x) { return g0(gen, a, x) + g1(gen, lattice, x); };

  Extrema out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  std::size_t i_min = 0;
  std::size_t i_max = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) * h;
    const double lo = lower(x);
    const double hi = upper(x);
    if (lo < out.inf) {
      out.inf = lo;
      i_min = i;
    }
    if (hi > out.sup) {
      out.sup = hi;
      i_max = i;
    }
  }
  auto bracket = [&](std::size_t i) {
    const double x = static_cast<double>(i) * h;
    return std::pair{std::max(0.0, x - h), std::min(std::nextafter(a, 0.0), x + h)};
  };
  const auto [lo_a, lo_b] = bracket(i_min);
  const auto [hi_a, hi_b] = bracket(i_max);
  out.inf = std::min(out.inf, refine(lower, lo_a, lo_b, true));
  out.sup = std::max(out.sup, refine(upper, hi_a, hi_b, false));
  return out;
}

}  // namespace

GaborBoundEstimate estimate_bounds(const PiecewiseGenerator& gen, const LatticeParams& lattice) {
  lattice.validate();
  GaborBoundEstimate est;
  est.g1_identically_zero = g1_vanishes(gen, lattice);
  est.exact = est.g1_identically_zero;

  Extrema ext;
  if (est.exact) {
    ext = closed_form_g0_extrema(gen, lattice.a);
  } else {
    ext = grid_extrema(gen, lattice);
    est.grid_points = kGaborGridPoints;
  }
  est.A = ext.inf / lattice.b;
  est.B = ext.sup / lattice.b;

  if (!(est.B > 0.0)) fail(Errc::EmptySupport, "generator vanishes on every lattice period");
  if (!(est.A > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "lower estimate A = " << est.A << " is not positive; no frame conclusion (B = " << est.B << ")";
    fail(Errc::NotPositiveA, os.str());
  }
  return est;
}

void WHParams::validate() const {
  if (!(finite(P) && finite(Q) && finite(p0) && finite(q0)) || P == 0.0) {
    fail(Errc::InvalidArgument, "Weyl-Heisenberg parameters need finite values and P != 0");
  }
  if (p0 == 0.0 || q0 == 0.0) fail(Errc::DegenerateLattice, "p0 and q0 must both be nonzero");
  if (!(std::abs(p0 * q0) < 2.0 * std::numbers::pi)) {
    fail(Errc::InvalidArgument, "need |p0 q0| < 2 pi");
  }
}

GaborMapping wh_to_gabor(const WHParams& wh) {
  wh.validate();
  GaborMapping out;
  out.wh = wh;
  out.lattice = {std::abs(wh.q0), std::abs(wh.P * wh.p0) / (2.0 * std::numbers::pi)};
  out.modulation_sign = wh.P * wh.p0 > 0.0 ? 1 : -1;
  // phi(x + n q0) = phi(x - (-sign(q0) n) |q0|)
  out.translation_sign = wh.q0 > 0.0 ? -1 : 1;
  return out;
}

Complex GaborMapping::phase(long m, long n) const {
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  return std::polar(1.0, wh.P * md * nd * wh.p0 * wh.q0 / 2.0 + wh.Q * md * wh.p0);
}

Complex GaborMapping::wh_element(const PiecewiseGenerator& gen, long m, long n, double x) const {
  const double md = static_cast<double>(m);
  return phase(m, n) * std::polar(1.0, wh.P * x * md * wh.p0) * gen(x + static_cast<double>(n) * wh.q0);
}

Complex GaborMapping::gabor_element(const PiecewiseGenerator& gen, long m, long n, double x) const {
  const double freq = static_cast<double>(modulation_sign * m) * lattice.b;
  const double shift = static_cast<double>(translation_sign * n) * lattice.a;
  return std::polar(1.0, 2.0 * std::numbers::pi * freq * x) * gen(x - shift);
}

double wh_coefficient_modulus_check(const PiecewiseGenerator& gen, const WHParams& wh, const SampledSignal& f, long m,
                                    long n) {
  const auto map = wh_to_gabor(wh);
  if (!(finite(f.step) && f.step > 0.0 && finite(f.x0)) || f.values.size() < 2) {
    fail(Errc::GridMismatch, "sampled signal needs a positive step and at least two samples");
  }
  const double grid_hi = f.x0 + f.step * static_cast<double>(f.values.size() - 1);
  const double shift = -static_cast<double>(n) * wh.q0;
  const double win_lo = gen.support_lo() + shift;
  const double win_hi = gen.support_hi() + shift;
  const double slack = kSupportSlack * std::max(1.0, std::abs(win_hi) + std::abs(win_lo));
  if (f.x0 > win_lo + slack || grid_hi < win_hi - slack) {
    std::ostringstream os;
    os << "grid [" << f.x0 << ", " << grid_hi << "] does not cover the window support [" << win_lo << ", " << win_hi
       << "]";
    fail(Errc::GridMismatch, os.str());
  }

  Complex wh_ip{};
  Complex gabor_ip{};
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double x = f.x0 + f.step * static_cast<double>(i);
    wh_ip += f.values[i] * std::conj(map.wh_element(gen, m, n, x));
    gabor_ip += f.values[i] * std::conj(map.gabor_element(gen, m, n, x));
  }
  return std::abs(std::abs(wh_ip) - std::abs(gabor_ip)) * f.step;
}

}  // namespace framesum
