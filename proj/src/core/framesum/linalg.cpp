#include "framesum/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "framesum/errors.hpp"

namespace framesum {

Complex checked_complex(double re, double im) {
  if (!std::isfinite(re) || !std::isfinite(im)) {
    fail(Errc::InvalidArgument, "complex entries must be finite");
  }
  return {re, im};
}

double norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) fail(Errc::DimensionMismatch, "inner product of vectors with different lengths");
  Complex s{};
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * std::conj(v[i]);
  return s;
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    std::ostringstream os;
    os << "matrix " << rows_ << "x" << cols_ << " given " << entries_.size() << " entries";
    fail(Errc::DimensionMismatch, os.str());
  }
  for (const auto& z : entries_) checked_complex(z.real(), z.imag());
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

CVector CMatrix::apply(std::span<const Complex> x) const {
  if (x.size() != cols_) fail(Errc::DimensionMismatch, "matrix-vector product with wrong vector length");
  CVector y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Complex s{};
    for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c) * x[c];
    y[r] = s;
  }
  return y;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
  if (cols_ != rhs.rows_) fail(Errc::DimensionMismatch, "matrix product with incompatible shapes");
  CMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex a = (*this)(r, k);
      if (a == Complex{}) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
    }
  return out;
}

CMatrix CMatrix::operator+(const CMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) fail(Errc::DimensionMismatch, "matrix sum with different shapes");
  CMatrix out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += rhs.entries_[i];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) fail(Errc::DimensionMismatch, "matrix difference with different shapes");
  CMatrix out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] -= rhs.entries_[i];
  return out;
}

CMatrix CMatrix::scaled(Complex c) const {
  CMatrix out = *this;
  for (auto& z : out.entries_) z *= c;
  return out;
}

double CMatrix::frobenius_norm() const { return norm(entries_); }

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

namespace {

double off_diagonal_mass(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p, q). The unitary is
// U = diag(1, e^{-i arg a_pq}) * [[c, s], [-s, c]] restricted to rows/cols p, q.
void rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;
  const Complex phase = apq / g;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * g);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Complex u_pp = c;
  const Complex u_pq = s;
  const Complex u_qp = -s * std::conj(phase);
  const Complex u_qq = c * std::conj(phase);

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * u_pp + akq * u_qp;
    a(k, q) = akp * u_pq + akq * u_qq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(u_pp) * apk + std::conj(u_qp) * aqk;
    a(q, k) = std::conj(u_pq) * apk + std::conj(u_qq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * u_pp + vkq * u_qp;
    v(k, q) = vkp * u_pq + vkq * u_qq;
  }
}

}  // namespace

EigenResult hermitian_eig(const CMatrix& m) {
  if (!m.square() || m.empty()) fail(Errc::InvalidArgument, "hermitian_eig needs a nonempty square matrix");
  const std::size_t n = m.rows();

  const double scale = m.max_abs();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) asym = std::max(asym, std::abs(m(i, j) - std::conj(m(j, i))));
  if (asym > tol::kHermitian * scale) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max |M - M*| = " << asym << " exceeds " << tol::kHermitian << " * " << scale;
    fail(Errc::NotHermitian, os.str());
  }

  // Work on the Hermitian part so round-off asymmetry does not leak in.
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  CMatrix v = CMatrix::identity(n);

  const double target = tol::kJacobiOffDiagonal * a.frobenius_norm();
  int sweep = 0;
  while (off_diagonal_mass(a) > target) {
    if (sweep == tol::kJacobiMaxSweeps) {
      fail(Errc::NoConvergence, "Jacobi eigensolver exceeded the sweep limit");
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    ++sweep;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenResult out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.eigenvalues[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) = v(r, order[c]);
  }
  return out;
}

SingularRange extreme_singular_values(const CMatrix& m) {
  if (m.empty()) fail(Errc::InvalidArgument, "extreme_singular_values needs a nonempty matrix");
  const auto eig = hermitian_eig(m.adjoint() * m);
  const double lo = std::max(eig.eigenvalues.front(), 0.0);
  const double hi = std::max(eig.eigenvalues.back(), 0.0);
  return {std::sqrt(lo), std::sqrt(hi)};
}

namespace {

EigenResult checked_hpd_eig(const CMatrix& m) {
  auto eig = hermitian_eig(m);
  const double lo = eig.eigenvalues.front();
  const double hi = eig.eigenvalues.back();
  if (!(hi > 0.0) || lo <= tol::kRank * hi) {
    std::ostringstream os;
    os << "operator is not positive definite: lambda_min = " << lo << ", lambda_max = " << hi;
    fail(Errc::SingularOperator, os.str());
  }
  return eig;
}

}  // namespace

CVector solve_hpd(const CMatrix& m, std::span<const Complex> b) {
  if (b.size() != m.rows()) fail(Errc::DimensionMismatch, "right-hand side length differs from matrix order");
  const auto eig = checked_hpd_eig(m);
  const std::size_t n = m.rows();
  const CMatrix& q = eig.eigenvectors;

  // x = Q diag(1/lambda) Q* b
  CVector coeff(n);
  for (std::size_t c = 0; c < n; ++c) {
    Complex s{};
    for (std::size_t r = 0; r < n; ++r) s += std::conj(q(r, c)) * b[r];
    coeff[c] = s / eig.eigenvalues[c];
  }
  CVector x(n);
  for (std::size_t r = 0; r < n; ++r) {
    Complex s{};
    for (std::size_t c = 0; c < n; ++c) s += q(r, c) * coeff[c];
    x[r] = s;
  }
  return x;
}

CMatrix inverse_hpd(const CMatrix& m) {
  const auto eig = checked_hpd_eig(m);
  const std::size_t n = m.rows();
  const CMatrix& q = eig.eigenvectors;
  CMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t c = 0; c < n; ++c) s += q(i, c) * std::conj(q(j, c)) / eig.eigenvalues[c];
      out(i, j) = s;
    }
  return out;
}

}  // namespace framesum
