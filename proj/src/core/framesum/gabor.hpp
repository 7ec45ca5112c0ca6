#pragma once

// Frame-bound estimates for Gabor systems {e^{2 pi i m b x} phi(x - n a)}
// generated by compactly supported piecewise windows, and the map from the
// discretised Weyl-Heisenberg orbit onto such a system.
//
// G0(x) = sum_n |phi(x - na)|^2
// G1(x) = sum_{k != 0} | sum_n phi(x - na) conj(phi(x - na - k/b)) |
// A = inf_{[0,a)} (G0 - G1) / b,  B = sup_{[0,a)} (G0 + G1) / b.

#include <cstddef>
#include <vector>

#include "framesum/linalg.hpp"

namespace framesum {

enum class PieceKind { Affine, SqrtAffine };

/// p(x) = alpha x + beta, or sqrt(alpha x + beta), on [lo, hi).
struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  PieceKind kind = PieceKind::Affine;
  double alpha = 0.0;
  double beta = 0.0;

  double value(double x) const;
};

class PiecewiseGenerator {
 public:
  /// Pieces must be sorted and pairwise disjoint with lo < hi; sqrt-affine
  /// pieces need a nonnegative radicand on [lo, hi]. Throws EmptySupport for
  /// an empty list and InvalidArgument for any other violation.
  explicit PiecewiseGenerator(std::vector<Piece> pieces);

  double operator()(double x) const;

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  double support_lo() const noexcept { return pieces_.front().lo; }
  double support_hi() const noexcept { return pieces_.back().hi; }
  double support_length() const noexcept { return support_hi() - support_lo(); }

  /// c * phi. Sqrt-affine pieces only admit c > 0.
  PiecewiseGenerator scaled(double c) const;

 private:
  std::vector<Piece> pieces_;
};

struct LatticeParams {
  double a = 1.0;  // translation step
  double b = 1.0;  // modulation step

  void validate() const;
};

struct GaborBoundEstimate {
  double A = 0.0;
  double B = 0.0;
  bool g1_identically_zero = false;
  bool exact = false;
  std::size_t grid_points = 0;  // 0 when the closed form was used
};

/// Points per period scanned when G1 does not vanish.
inline constexpr std::size_t kGaborGridPoints = std::size_t{1} << 14;

double g0(const PiecewiseGenerator& gen, double a, double x);
double g1(const PiecewiseGenerator& gen, const LatticeParams& lattice, double x);

/// True when the support is no longer than 1/b, so no two windows shifted by
/// a nonzero multiple of 1/b overlap and G1 vanishes identically.
bool g1_vanishes(const PiecewiseGenerator& gen, const LatticeParams& lattice);

/// Throws NotPositiveA when the lower estimate is not positive and
/// EmptySupport when phi vanishes everywhere.
GaborBoundEstimate estimate_bounds(const PiecewiseGenerator& gen, const LatticeParams& lattice);

/// Parameters of sigma^{P,Q} and of the discrete subset (p0, q0).
struct WHParams {
  double P = 1.0;
  double Q = 0.0;
  double p0 = 0.0;
  double q0 = 0.0;

  void validate() const;
};

/// phi^{P,Q}_{m,n}(x) = phase(m, n) * E_{s_mod m b} T_{s_tr n a} phi(x).
struct GaborMapping {
  WHParams wh;
  LatticeParams lattice;
  int modulation_sign = 1;
  int translation_sign = 1;

  /// exp(i [P m n p0 q0 / 2 + Q m p0]), unimodular.
  Complex phase(long m, long n) const;
  Complex wh_element(const PiecewiseGenerator& gen, long m, long n, double x) const;
  Complex gabor_element(const PiecewiseGenerator& gen, long m, long n, double x) const;
};

/// Throws DegenerateLattice when p0 or q0 is zero.
GaborMapping wh_to_gabor(const WHParams& wh);

/// f(x0 + i * step) for i = 0 .. values.size() - 1.
struct SampledSignal {
  double x0 = 0.0;
  double step = 0.0;
  std::vector<Complex> values;
};

/// | |<f, phi^{P,Q}_{m,n}>_h| - |<f, E_{mb} T_{na} phi>_h| | with both inner
/// products taken by the same Riemann sum. Throws GridMismatch if the grid is
/// malformed or does not cover the shifted window.
double wh_coefficient_modulus_check(const PiecewiseGenerator& gen, const WHParams& wh, const SampledSignal& f, long m,
                                    long n);

}  // namespace framesum
