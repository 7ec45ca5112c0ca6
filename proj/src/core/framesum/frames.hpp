#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "framesum/linalg.hpp"

namespace framesum {

namespace tol {
/// Width at or below which a frame counts as tight.
inline constexpr double kTightness = 1e-10;
/// Maximum reconstruction residual accepted by verify_dual.
inline constexpr double kDualResidual = 1e-9;
}  // namespace tol

/// Indexed family of vectors in C^d. Zero vectors are allowed as members,
/// but the family as a whole must contain a nonzero vector.
class FiniteFrame {
 public:
  FiniteFrame(std::size_t dim, std::vector<CVector> vectors);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  const CVector& operator[](std::size_t k) const { return vectors_[k]; }
  const std::vector<CVector>& vectors() const noexcept { return vectors_; }

  FiniteFrame scaled(Complex c) const;

 private:
  std::size_t dim_;
  std::vector<CVector> vectors_;
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;

  /// Throws InvalidBounds unless 0 < lower <= upper < inf.
  void validate() const;
};

struct FrameCertificate {
  FrameBounds bounds;  // optimal: extreme eigenvalues of S
  double width = 0.0;
  bool is_tight = false;
  bool is_parseval = false;
};

/// S = sum_k f_k f_k^*.
CMatrix frame_operator(const FiniteFrame& frame);

/// Coefficients <f, f_k>.
CVector analysis(const FiniteFrame& frame, std::span<const Complex> f);

/// sum_k c_k f_k.
CVector synthesis(const FiniteFrame& frame, std::span<const Complex> coefficients);

/// Optimal frame bounds from the spectrum of S. Throws NotAFrame when the
/// vectors fail to span (lambda_min <= kRank * lambda_max).
FrameCertificate exact_bounds(const FiniteFrame& frame);

/// (B - A) / (B + A).
double width(const FrameBounds& bounds);

/// {S^{-1} f_k}.
FiniteFrame canonical_dual(const FiniteFrame& frame);

struct DualCheck {
  bool is_dual = false;
  double max_residual = 0.0;
};

/// Probes f = sum_k <f, f_k> g_k on `trials` random unit vectors drawn from `seed`.
DualCheck verify_dual(const FiniteFrame& frame, const FiniteFrame& candidate, std::size_t trials,
                      std::uint64_t seed = 0);

/// (1/A) sum_k <f, f_k> f_k for an A-tight frame; throws NotTight otherwise.
CVector tight_reconstruct(const FiniteFrame& frame, double tight_bound, std::span<const Complex> f);

/// Uniformly distributed unit vector in C^d (normalised complex Gaussian).
CVector random_unit_vector(std::size_t dim, std::uint64_t seed);

}  // namespace framesum
