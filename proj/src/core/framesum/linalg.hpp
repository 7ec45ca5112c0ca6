#pragma once

// Dense complex linear algebra sized for the toolkit (d up to a few hundred):
// Hermitian eigendecomposition by cyclic Jacobi rotations, extreme singular
// values through M*M, and Hermitian positive-definite solves.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace framesum {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

namespace tol {
/// Relative asymmetry admitted by hermitian_eig, measured in the max norm.
inline constexpr double kHermitian = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius mass drops below this times ||M||_F.
inline constexpr double kJacobiOffDiagonal = 1e-14;
inline constexpr int kJacobiMaxSweeps = 100;
/// lambda_min <= kRank * lambda_max is treated as singular.
inline constexpr double kRank = 1e-12;
}  // namespace tol

/// Throws InvalidArgument unless both parts are finite.
Complex checked_complex(double re, double im);

double norm(std::span<const Complex> v);
/// <u, v> with conjugation on the second argument.
Complex inner(std::span<const Complex> u, std::span<const Complex> v);

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  /// Row-major entries; throws DimensionMismatch if the count is wrong.
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  std::span<const Complex> entries() const noexcept { return entries_; }

  CMatrix adjoint() const;
  CVector apply(std::span<const Complex> x) const;
  CMatrix operator*(const CMatrix& rhs) const;
  CMatrix operator+(const CMatrix& rhs) const;
  CMatrix operator-(const CMatrix& rhs) const;
  CMatrix scaled(Complex c) const;

  double frobenius_norm() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // column i pairs with eigenvalues[i]
};

/// Errors: NotHermitian, NoConvergence, InvalidArgument (non-square or empty).
EigenResult hermitian_eig(const CMatrix& m);

struct SingularRange {
  double min = 0.0;
  double max = 0.0;
};

SingularRange extreme_singular_values(const CMatrix& m);

/// Solves M x = b for Hermitian positive-definite M via its eigendecomposition.
/// Throws SingularOperator when lambda_min <= kRank * lambda_max.
CVector solve_hpd(const CMatrix& m, std::span<const Complex> b);

/// M^{-1} for Hermitian positive-definite M; same failure contract as solve_hpd.
CMatrix inverse_hpd(const CMatrix& m);

}  // namespace framesum
