#pragma once

// Thin RAII layer over the framesum C API.

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "framesum/framesum.h"

namespace fsw {

using Cx = std::complex<double>;
using Vec = std::vector<Cx>;

class ApiError : public std::runtime_error {
 public:
  ApiError(fs_status status, const std::string& what) : std::runtime_error(what), status_(status) {}
  fs_status status() const noexcept { return status_; }
  const char* name() const noexcept { return fs_status_name(status_); }

 private:
  fs_status status_;
};

inline void check(fs_status s) {
  if (s != FS_OK) throw ApiError(s, fs_last_error());
}

inline fs_complex to_c(Cx z) { return {z.real(), z.imag()}; }
inline Cx from_c(fs_complex z) { return {z.re, z.im}; }

inline std::vector<fs_complex> to_c(const Vec& v) {
  std::vector<fs_complex> out;
  out.reserve(v.size());
  for (auto z : v) out.push_back(to_c(z));
  return out;
}

inline Vec from_c(const std::vector<fs_complex>& v) {
  Vec out;
  out.reserve(v.size());
  for (auto z : v) out.push_back(from_c(z));
  return out;
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const noexcept { Destroy(p); }
};

class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, const Vec& row_major) {
    const auto e = to_c(row_major);
    fs_matrix* m = nullptr;
    check(fs_matrix_create(rows, cols, e.data(), &m));
    h_.reset(m);
  }
  explicit Matrix(fs_matrix* owned) : h_(owned) {}

  const fs_matrix* get() const noexcept { return h_.get(); }
  std::size_t rows() const { return fs_matrix_rows(h_.get()); }
  std::size_t cols() const { return fs_matrix_cols(h_.get()); }

  std::pair<double, double> singular_range() const {
    double lo = 0.0, hi = 0.0;
    check(fs_matrix_extreme_singular_values(h_.get(), &lo, &hi));
    return {lo, hi};
  }

 private:
  std::unique_ptr<fs_matrix, Deleter<fs_matrix, fs_matrix_destroy>> h_;
};

class Frame {
 public:
  Frame(std::size_t dim, const std::vector<Vec>& vectors) {
    std::vector<fs_complex> flat;
    flat.reserve(dim * vectors.size());
    for (const auto& v : vectors) {
      if (v.size() != dim) throw ApiError(FS_ERR_DIMENSION_MISMATCH, "frame vector length differs from dim");
      for (auto z : v) flat.push_back(to_c(z));
    }
    fs_frame* f = nullptr;
    check(fs_frame_create(dim, vectors.size(), flat.data(), &f));
    h_.reset(f);
  }
  explicit Frame(fs_frame* owned) : h_(owned) {}

  const fs_frame* get() const noexcept { return h_.get(); }
  std::size_t dim() const { return fs_frame_dim(h_.get()); }
  std::size_t size() const { return fs_frame_count(h_.get()); }

  fs_certificate exact_bounds() const {
    fs_certificate c{};
    check(fs_frame_exact_bounds(h_.get(), &c));
    return c;
  }

  std::vector<Vec> vectors() const {
    std::vector<fs_complex> flat(dim() * size());
    check(fs_frame_vectors(h_.get(), flat.data(), flat.size()));
    std::vector<Vec> out(size());
    for (std::size_t k = 0; k < size(); ++k)
      for (std::size_t i = 0; i < dim(); ++i) out[k].push_back(from_c(flat[k * dim() + i]));
    return out;
  }

 private:
  std::unique_ptr<fs_frame, Deleter<fs_frame, fs_frame_destroy>> h_;
};

class Generator {
 public:
  explicit Generator(const std::vector<fs_piece>& pieces) {
    fs_generator* g = nullptr;
    check(fs_generator_create(pieces.data(), pieces.size(), &g));
    h_.reset(g);
  }

  const fs_generator* get() const noexcept { return h_.get(); }

  fs_gabor_estimate estimate(fs_lattice lattice) const {
    fs_gabor_estimate e{};
    check(fs_gabor_estimate_bounds(h_.get(), lattice, &e));
    return e;
  }

 private:
  std::unique_ptr<fs_generator, Deleter<fs_generator, fs_generator_destroy>> h_;
};

class Run {
 public:
  Run(const Frame& frame, fs_bounds used, std::size_t max_iters, double stop_tol, const Vec& target) {
    const auto t = to_c(target);
    fs_run* r = nullptr;
    check(fs_algo_run(frame.get(), used, max_iters, stop_tol, t.data(), t.size(), &r));
    h_.reset(r);
  }

  std::vector<fs_record> records() const {
    std::vector<fs_record> out(fs_run_length(h_.get()));
    check(fs_run_records(h_.get(), out.data(), out.size()));
    return out;
  }

 private:
  std::unique_ptr<fs_run, Deleter<fs_run, fs_run_destroy>> h_;
};

inline Frame sum_frame(const std::vector<const Frame*>& frames, const Vec& coefficients) {
  std::vector<const fs_frame*> hs;
  for (const auto* f : frames) hs.push_back(f->get());
  const auto c = to_c(coefficients);
  fs_frame* out = nullptr;
  check(fs_build_sum_frame(hs.data(), c.data(), c.size(), &out));
  return Frame(out);
}

inline fs_cert_report certify(const fs_predicted& p, const Frame& actual) {
  fs_cert_report r{};
  check(fs_certify(&p, actual.get(), &r));
  return r;
}

inline double width(fs_bounds b) {
  double w = 0.0;
  check(fs_width(b, &w));
  return w;
}

inline std::string width4(double w) {
  char buf[64];
  check(fs_width_render4(w, buf, sizeof buf));
  return buf;
}

inline Vec random_unit_vector(std::size_t dim, std::uint64_t seed) {
  std::vector<fs_complex> out(dim);
  check(fs_random_unit_vector(dim, seed, out.data()));
  return from_c(out);
}

}  // namespace fsw
