#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "framesum/frames.hpp"
#include "framesum/linalg.hpp"

namespace fstest {

using framesum::CMatrix;
using framesum::Complex;
using framesum::CVector;
using framesum::FiniteFrame;

inline Complex gauss(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  const double re = n(rng);
  return {re, n(rng)};
}

inline CMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  CMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = gauss(rng);
  return m;
}

inline CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  const auto x = random_matrix(n, n, rng);
  CMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (x(i, j) + std::conj(x(j, i)));
  return h;
}

/// Gaussian vectors; n >= d keeps the family spanning with probability one.
inline FiniteFrame random_frame(std::size_t d, std::size_t n, std::mt19937_64& rng) {
  std::vector<CVector> v(n, CVector(d));
  for (auto& f : v)
    for (auto& z : f) z = gauss(rng);
  return FiniteFrame(d, std::move(v));
}

/// d x n matrix whose columns are the frame vectors.
inline CMatrix synthesis_matrix(const FiniteFrame& f) {
  CMatrix m(f.dim(), f.size());
  for (std::size_t k = 0; k < f.size(); ++k)
    for (std::size_t i = 0; i < f.dim(); ++i) m(i, k) = f[k][i];
  return m;
}

inline FiniteFrame frame_from_columns(const CMatrix& m) {
  std::vector<CVector> v(m.cols(), CVector(m.rows()));
  for (std::size_t k = 0; k < m.cols(); ++k)
    for (std::size_t i = 0; i < m.rows(); ++i) v[k][i] = m(i, k);
  return FiniteFrame(m.rows(), std::move(v));
}

inline Eigen::MatrixXcd to_eigen(const CMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

/// Extreme eigenvalues of sum_k f_k f_k^* computed with Eigen.
inline std::pair<double, double> eigen_frame_bounds(const FiniteFrame& f) {
  const auto t = to_eigen(synthesis_matrix(f));
  const Eigen::MatrixXcd s = t * t.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
  return {es.eigenvalues()(0), es.eigenvalues()(es.eigenvalues().size() - 1)};
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

}  // namespace fstest
