#include "framesum/framesum.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "framesum/algorithm.hpp"
#include "framesum/errors.hpp"
#include "framesum/frames.hpp"
#include "framesum/gabor.hpp"
#include "framesum/linalg.hpp"
#include "framesum/sums.hpp"

struct fs_frame {
  framesum::FiniteFrame value;
};
struct fs_matrix {
  framesum::CMatrix value;
};
struct fs_generator {
  framesum::PiecewiseGenerator value;
};
struct fs_run {
  framesum::AlgoRun value;
};

namespace {

using framesum::Complex;
using framesum::CVector;
using framesum::Errc;

thread_local std::string g_last_error;

fs_status set_error(fs_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, mapping exceptions onto status codes.
template <class F>
fs_status guarded(F&& body) noexcept {
  try {
    body();
    return FS_OK;
  } catch (const framesum::Error& e) {
    return set_error(static_cast<fs_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(FS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(FS_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(FS_ERR_INTERNAL, "unknown failure");
  }
}

void need_capacity(std::size_t capacity, std::size_t required) {
  if (capacity < required) {
    framesum::fail(Errc::InvalidArgument, "output capacity " + std::to_string(capacity) + " is below the required " +
                                              std::to_string(required));
  }
}

CVector to_cvector(const fs_complex* p, std::size_t n) {
  CVector out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(framesum::checked_complex(p[i].re, p[i].im));
  return out;
}

fs_complex to_c(Complex z) { return {z.real(), z.imag()}; }

void copy_out(const CVector& v, fs_complex* out) {
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_c(v[i]);
}

framesum::FrameBounds to_bounds(fs_bounds b) { return {b.lower, b.upper}; }

fs_predicted to_c(const framesum::PredictedBounds& p) {
  return {p.lower, p.upper, p.condition_holds ? 1 : 0, p.condition_margin};
}

framesum::PredictedBounds from_c(const fs_predicted& p) {
  return {p.lower, p.upper, p.condition_holds != 0, p.condition_margin};
}

framesum::WHParams from_c(fs_wh_params w) { return {w.P, w.Q, w.p0, w.q0}; }

}  // namespace

extern "C" {

const char* fs_last_error(void) { return g_last_error.c_str(); }

const char* fs_status_name(fs_status status) {
  switch (status) {
    case FS_OK:
      return "Ok";
    case FS_ERR_NULL_POINTER:
      return "NullPointer";
    case FS_ERR_INTERNAL:
      return "Internal";
    default:
      if (status >= 1 && status <= 18) return framesum::errc_name(static_cast<Errc>(status));
      return "Unknown";
  }
}

const char* fs_version(void) { return "0.1.0"; }

// ---- matrices ------------------------------------------------------------

fs_status fs_matrix_create(size_t rows, size_t cols, const fs_complex* entries, fs_matrix** out) {
  if (!out || (!entries && rows * cols > 0)) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_matrix_create");
  *out = nullptr;
  return guarded([&] {
    if (rows == 0 || cols == 0) framesum::fail(Errc::InvalidArgument, "matrix dimensions must be positive");
    *out = new fs_matrix{framesum::CMatrix(rows, cols, to_cvector(entries, rows * cols))};
  });
}

void fs_matrix_destroy(fs_matrix* m) { delete m; }

size_t fs_matrix_rows(const fs_matrix* m) { return m ? m->value.rows() : 0; }
size_t fs_matrix_cols(const fs_matrix* m) { return m ? m->value.cols() : 0; }

fs_status fs_matrix_entries(const fs_matrix* m, fs_complex* out, size_t capacity) {
  if (!m || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_matrix_entries");
  return guarded([&] {
    const auto e = m->value.entries();
    need_capacity(capacity, e.size());
    for (std::size_t i = 0; i < e.size(); ++i) out[i] = to_c(e[i]);
  });
}

fs_status fs_matrix_hermitian_eig(const fs_matrix* m, double* eigenvalues, size_t capacity, fs_matrix** eigenvectors) {
  if (!m || !eigenvalues) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_matrix_hermitian_eig");
  if (eigenvectors) *eigenvectors = nullptr;
  return guarded([&] {
    auto r = framesum::hermitian_eig(m->value);
    need_capacity(capacity, r.eigenvalues.size());
    std::copy(r.eigenvalues.begin(), r.eigenvalues.end(), eigenvalues);
    if (eigenvectors) *eigenvectors = new fs_matrix{std::move(r.eigenvectors)};
  });
}

fs_status fs_matrix_extreme_singular_values(const fs_matrix* m, double* sigma_min, double* sigma_max) {
  if (!m || !sigma_min || !sigma_max) {
    return set_error(FS_ERR_NULL_POINTER, "null argument to fs_matrix_extreme_singular_values");
  }
  return guarded([&] {
    const auto s = framesum::extreme_singular_values(m->value);
    *sigma_min = s.min;
    *sigma_max = s.max;
  });
}

fs_status fs_matrix_solve_hpd(const fs_matrix* m, const fs_complex* b, size_t n, fs_complex* x) {
  if (!m || !b || !x) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_matrix_solve_hpd");
  return guarded([&] {
    if (n != m->value.rows()) framesum::fail(Errc::DimensionMismatch, "right-hand side length differs from matrix size");
    copy_out(framesum::solve_hpd(m->value, to_cvector(b, n)), x);
  });
}

// ---- frames --------------------------------------------------------------

fs_status fs_frame_create(size_t dim, size_t count, const fs_complex* vectors, fs_frame** out) {
  if (!out || (!vectors && dim * count > 0)) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_frame_create");
  *out = nullptr;
  return guarded([&] {
    std::vector<CVector> vs;
    vs.reserve(count);
    for (std::size_t k = 0; k < count; ++k) vs.push_back(to_cvector(vectors + k * dim, dim));
    *out = new fs_frame{framesum::FiniteFrame(dim, std::move(vs))};
  });
}

void fs_frame_destroy(fs_frame* frame) { delete frame; }

size_t fs_frame_dim(const fs_frame* frame) { return frame ? frame->value.dim() : 0; }
size_t fs_frame_count(const fs_frame* frame) { return frame ? frame->value.size() : 0; }

fs_status fs_frame_vectors(const fs_frame* frame, fs_complex* out, size_t capacity) {
  if (!frame || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_frame_vectors");
  return guarded([&] {
    const auto& f = frame->value;
    need_capacity(capacity, f.size() * f.dim());
    for (std::size_t k = 0; k < f.size(); ++k) copy_out(f[k], out + k * f.dim());
  });
}

fs_status fs_frame_operator(const fs_frame* frame, fs_matrix** out) {
  if (!frame || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_frame_operator");
  *out = nullptr;
  return guarded([&] { *out = new fs_matrix{framesum::frame_operator(frame->value)}; });
}

fs_status fs_frame_analysis(const fs_frame* frame, const fs_complex* f, size_t dim, fs_complex* out, size_t capacity) {
  if (!frame || !f || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_frame_analysis");
  return guarded([&] {
    const auto c = framesum::analysis(frame->value, to_cvector(f, dim));
    need_capacity(capacity, c.size());
    copy_out(c, out);
  });
}

fs_status fs_frame_exact_bounds(const fs_frame* frame, fs_certificate* out) {
  if (!frame || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_frame_exact_bounds");
  return guarded([&] {
    const auto c = framesum::exact_bounds(frame->value);
    *out = {{c.bounds.lower, c.bounds.upper}, c.width, c.is_tight ? 1 : 0, c.is_parseval ? 1 : 0};
  });
}

fs_status fs_frame_canonical_dual(const fs_frame* frame, fs_frame** out) {
  if (!frame || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_frame_canonical_dual");
  *out = nullptr;
  return guarded([&] { *out = new fs_frame{framesum::canonical_dual(frame->value)}; });
}

fs_status fs_frame_verify_dual(const fs_frame* frame, const fs_frame* candidate, size_t trials, uint64_t seed,
                               int* is_dual, double* max_residual) {
  if (!frame || !candidate || !is_dual || !max_residual) {
    return set_error(FS_ERR_NULL_POINTER, "null argument to fs_frame_verify_dual");
  }
  return guarded([&] {
    const auto r = framesum::verify_dual(frame->value, candidate->value, trials, seed);
    *is_dual = r.is_dual ? 1 : 0;
    *max_residual = r.max_residual;
  });
}

fs_status fs_frame_tight_reconstruct(const fs_frame* frame, double tight_bound, const fs_complex* f, size_t dim,
                                     fs_complex* out) {
  if (!frame || !f || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_frame_tight_reconstruct");
  return guarded([&] { copy_out(framesum::tight_reconstruct(frame->value, tight_bound, to_cvector(f, dim)), out); });
}

fs_status fs_width(fs_bounds bounds, double* out) {
  if (!out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_width");
  return guarded([&] { *out = framesum::width(to_bounds(bounds)); });
}

fs_status fs_width_render4(double width, char* out, size_t capacity) {
  if (!out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_width_render4");
  return guarded([&] {
    const auto s = framesum::render_width4(width);
    need_capacity(capacity, s.size() + 1);
    std::memcpy(out, s.c_str(), s.size() + 1);
  });
}

fs_status fs_random_unit_vector(size_t dim, uint64_t seed, fs_complex* out) {
  if (!out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_random_unit_vector");
  return guarded([&] { copy_out(framesum::random_unit_vector(dim, seed), out); });
}

// ---- sums ----------------------------------------------------------------

namespace {

std::vector<framesum::FrameBounds> bounds_list(const fs_bounds* b, std::size_t k) {
  std::vector<framesum::FrameBounds> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(to_bounds(b[i]));
  return out;
}

}  // namespace

fs_status fs_finite_sum_predict(const fs_bounds* bounds, const fs_complex* coefficients, size_t k, size_t pivot,
                                fs_predicted* out) {
  if (!bounds || !coefficients || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_finite_sum_predict");
  return guarded([&] {
    *out = to_c(framesum::finite_sum_predict(bounds_list(bounds, k), to_cvector(coefficients, k), pivot));
  });
}

fs_status fs_finite_sum_predict_best(const fs_bounds* bounds, const fs_complex* coefficients, size_t k, size_t* pivot,
                                     fs_predicted* out) {
  if (!bounds || !coefficients || !pivot || !out) {
    return set_error(FS_ERR_NULL_POINTER, "null argument to fs_finite_sum_predict_best");
  }
  return guarded([&] {
    const auto r = framesum::best_pivot_predict(bounds_list(bounds, k), to_cvector(coefficients, k));
    *pivot = r.pivot;
    *out = to_c(r.predicted);
  });
}

fs_status fs_dual_sum_predict(fs_bounds b1, fs_bounds b2, fs_predicted* out) {
  if (!out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_dual_sum_predict");
  return guarded([&] { *out = to_c(framesum::dual_sum_predict(to_bounds(b1), to_bounds(b2))); });
}

fs_status fs_operator_sum_predict(const fs_frame* frame1, const fs_frame* frame2, const fs_matrix* theta1,
                                  const fs_matrix* theta2, const double* m1, const double* m2, const double* norm1,
                                  const double* norm2, fs_bounds b1, fs_bounds b2, fs_predicted* out) {
  if (!frame1 || !frame2 || !theta1 || !theta2 || !out) {
    return set_error(FS_ERR_NULL_POINTER, "null argument to fs_operator_sum_predict");
  }
  return guarded([&] {
    auto spec = framesum::OperatorSumSpec::from_operators(frame1->value, frame2->value, theta1->value, theta2->value);
    if (m1) spec.m1 = *m1;
    if (m2) spec.m2 = *m2;
    if (norm1) spec.norm1 = *norm1;
    if (norm2) spec.norm2 = *norm2;
    *out = to_c(framesum::operator_sum_predict(spec, to_bounds(b1), to_bounds(b2)));
  });
}

fs_status fs_perturbed_sum_predict(const fs_complex* alpha, size_t alpha_len, const fs_complex* beta, size_t beta_len,
                                   fs_bounds b1, fs_bounds b2, fs_predicted* out) {
  if (!alpha || !beta || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_perturbed_sum_predict");
  return guarded([&] {
    const auto ea = framesum::ScalarEnvelope::from_sequence(to_cvector(alpha, alpha_len));
    const auto eb = framesum::ScalarEnvelope::from_sequence(to_cvector(beta, beta_len));
    *out = to_c(framesum::perturbed_sum_predict(ea, eb, to_bounds(b1), to_bounds(b2)));
  });
}

fs_status fs_build_sum_frame(const fs_frame* const* frames, const fs_complex* coefficients, size_t k, fs_frame** out) {
  if (!frames || !coefficients || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_build_sum_frame");
  *out = nullptr;
  for (std::size_t i = 0; i < k; ++i)
    if (!frames[i]) return set_error(FS_ERR_NULL_POINTER, "null frame handle in fs_build_sum_frame");
  return guarded([&] {
    framesum::WeightedSumSpec spec;
    for (std::size_t i = 0; i < k; ++i) spec.frames.push_back(frames[i]->value);
    spec.coefficients = to_cvector(coefficients, k);
    *out = new fs_frame{framesum::build_sum_frame(spec)};
  });
}

fs_status fs_build_operator_sum_frame(const fs_frame* frame1, const fs_frame* frame2, const fs_matrix* theta1,
                                      const fs_matrix* theta2, fs_frame** out) {
  if (!frame1 || !frame2 || !theta1 || !theta2 || !out) {
    return set_error(FS_ERR_NULL_POINTER, "null argument to fs_build_operator_sum_frame");
  }
  *out = nullptr;
  return guarded([&] {
    const auto spec =
        framesum::OperatorSumSpec::from_operators(frame1->value, frame2->value, theta1->value, theta2->value);
    *out = new fs_frame{framesum::build_operator_sum_frame(spec)};
  });
}

fs_status fs_build_perturbed_sum_frame(const fs_complex* alpha, const fs_complex* beta, size_t count,
                                       const fs_frame* frame1, const fs_frame* frame2, fs_frame** out) {
  if (!alpha || !beta || !frame1 || !frame2 || !out) {
    return set_error(FS_ERR_NULL_POINTER, "null argument to fs_build_perturbed_sum_frame");
  }
  *out = nullptr;
  return guarded([&] {
    const auto ea = framesum::ScalarEnvelope::from_sequence(to_cvector(alpha, count));
    const auto eb = framesum::ScalarEnvelope::from_sequence(to_cvector(beta, count));
    *out = new fs_frame{framesum::build_perturbed_sum_frame(ea, eb, frame1->value, frame2->value)};
  });
}

fs_status fs_certify(const fs_predicted* predicted, const fs_frame* actual, fs_cert_report* out) {
  if (!predicted || !actual || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_certify");
  return guarded([&] {
    const auto r = framesum::certify(from_c(*predicted), actual->value);
    *out = {to_c(r.predicted),  {r.exact.lower, r.exact.upper}, r.certified ? 1 : 0, r.lower_slack, r.upper_slack,
            r.predicted_width, r.exact_width};
  });
}

// ---- Gabor ---------------------------------------------------------------

fs_status fs_generator_create(const fs_piece* pieces, size_t count, fs_generator** out) {
  if (!out || (!pieces && count > 0)) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_generator_create");
  *out = nullptr;
  return guarded([&] {
    std::vector<framesum::Piece> ps;
    for (std::size_t i = 0; i < count; ++i) {
      const auto& p = pieces[i];
      if (p.kind != FS_PIECE_AFFINE && p.kind != FS_PIECE_SQRT_AFFINE) {
        framesum::fail(Errc::InvalidArgument, "piece " + std::to_string(i) + " has an unknown kind");
      }
      ps.push_back({p.lo, p.hi, p.kind == FS_PIECE_AFFINE ? framesum::PieceKind::Affine : framesum::PieceKind::SqrtAffine,
                    p.alpha, p.beta});
    }
    *out = new fs_generator{framesum::PiecewiseGenerator(std::move(ps))};
  });
}

void fs_generator_destroy(fs_generator* gen) { delete gen; }

fs_status fs_generator_eval(const fs_generator* gen, double x, double* out) {
  if (!gen || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_generator_eval");
  return guarded([&] { *out = gen->value(x); });
}

fs_status fs_gabor_g0(const fs_generator* gen, double a, double x, double* out) {
  if (!gen || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_gabor_g0");
  return guarded([&] { *out = framesum::g0(gen->value, a, x); });
}

fs_status fs_gabor_g1(const fs_generator* gen, fs_lattice lattice, double x, double* out) {
  if (!gen || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_gabor_g1");
  return guarded([&] { *out = framesum::g1(gen->value, {lattice.a, lattice.b}, x); });
}

fs_status fs_gabor_estimate_bounds(const fs_generator* gen, fs_lattice lattice, fs_gabor_estimate* out) {
  if (!gen || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_gabor_estimate_bounds");
  return guarded([&] {
    const auto e = framesum::estimate_bounds(gen->value, {lattice.a, lattice.b});
    *out = {e.A, e.B, e.g1_identically_zero ? 1 : 0, e.exact ? 1 : 0, e.grid_points};
  });
}

fs_status fs_wh_to_gabor(fs_wh_params wh, fs_gabor_mapping* out) {
  if (!out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_wh_to_gabor");
  return guarded([&] {
    const auto m = framesum::wh_to_gabor(from_c(wh));
    *out = {{m.lattice.a, m.lattice.b}, m.modulation_sign, m.translation_sign};
  });
}

fs_status fs_wh_phase(fs_wh_params wh, long m, long n, fs_complex* out) {
  if (!out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_wh_phase");
  return guarded([&] { *out = to_c(framesum::wh_to_gabor(from_c(wh)).phase(m, n)); });
}

fs_status fs_wh_modulus_check(const fs_generator* gen, fs_wh_params wh, double x0, double step,
                              const fs_complex* samples, size_t count, long m, long n, double* residual) {
  if (!gen || !residual || (!samples && count > 0)) {
    return set_error(FS_ERR_NULL_POINTER, "null argument to fs_wh_modulus_check");
  }
  return guarded([&] {
    framesum::SampledSignal f{x0, step, to_cvector(samples, count)};
    *residual = framesum::wh_coefficient_modulus_check(gen->value, from_c(wh), f, m, n);
  });
}

// ---- frame algorithm -----------------------------------------------------

fs_status fs_algo_run(const fs_frame* frame, fs_bounds bounds_used, size_t max_iters, double stop_tol,
                      const fs_complex* target, size_t dim, fs_run** out) {
  if (!frame || !target || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_algo_run");
  *out = nullptr;
  return guarded([&] {
    framesum::AlgoConfig config{frame->value, to_bounds(bounds_used), max_iters, std::nullopt};
    if (!(stop_tol < 0.0)) config.stop_tol = stop_tol;
    *out = new fs_run{framesum::run(config, to_cvector(target, dim))};
  });
}

void fs_run_destroy(fs_run* run) { delete run; }

size_t fs_run_length(const fs_run* run) { return run ? run->value.records.size() : 0; }

fs_status fs_run_records(const fs_run* run, fs_record* out, size_t capacity) {
  if (!run || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_run_records");
  return guarded([&] {
    const auto& r = run->value.records;
    need_capacity(capacity, r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = {r[i].k, r[i].error, r[i].envelope};
  });
}

fs_status fs_run_iterate(const fs_run* run, fs_complex* out, size_t capacity) {
  if (!run || !out) return set_error(FS_ERR_NULL_POINTER, "null argument to fs_run_iterate");
  return guarded([&] {
    need_capacity(capacity, run->value.iterate.size());
    copy_out(run->value.iterate, out);
  });
}

}  // extern "C"
