#ifndef FRAMESUM_FRAMESUM_H
#define FRAMESUM_FRAMESUM_H

/*
 * framesum C API.
 *
 * Finite frames, exact frame bounds, predicted bounds for sums of frames,
 * Gabor frame-bound estimates and the frame algorithm.
 *
 * Conventions:
 *  - Every fallible call returns fs_status; FS_OK is zero. On failure,
 *    fs_last_error() returns a message for the calling thread, valid until
 *    that thread's next failing call.
 *  - Objects are opaque handles created by *_create / *_build functions and
 *    released with the matching *_destroy. Destroy functions accept NULL.
 *  - Vectors are arrays of fs_complex. Frames are passed as `count` vectors
 *    of length `dim`, stored back to back. Matrices are row-major.
 *  - Output arrays are caller-allocated; a too-small capacity yields
 *    FS_ERR_INVALID_ARGUMENT.
 *  - Inner products conjugate the second argument.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FRAMESUM_BUILDING)
#    define FS_API __declspec(dllexport)
#  else
#    define FS_API __declspec(dllimport)
#  endif
#else
#  define FS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fs_status {
  FS_OK = 0,
  FS_ERR_INVALID_ARGUMENT = 1,
  FS_ERR_DIMENSION_MISMATCH = 2,
  FS_ERR_COUNT_MISMATCH = 3,
  FS_ERR_NOT_HERMITIAN = 4,
  FS_ERR_NO_CONVERGENCE = 5,
  FS_ERR_SINGULAR_OPERATOR = 6,
  FS_ERR_NOT_A_FRAME = 7,
  FS_ERR_INVALID_BOUNDS = 8,
  FS_ERR_NOT_TIGHT = 9,
  FS_ERR_ZERO_COEFFICIENT = 10,
  FS_ERR_ALIGNMENT_MISMATCH = 11,
  FS_ERR_INCONSISTENT_SPEC = 12,
  FS_ERR_NOT_POSITIVE_A = 13,
  FS_ERR_EMPTY_SUPPORT = 14,
  FS_ERR_DEGENERATE_LATTICE = 15,
  FS_ERR_GRID_MISMATCH = 16,
  FS_ERR_INVALID_BOUNDS_FOR_FRAME = 17,
  FS_ERR_CONDITION_NOT_MET = 18,
  FS_ERR_NULL_POINTER = 100,
  FS_ERR_INTERNAL = 101
} fs_status;

typedef struct fs_complex {
  double re;
  double im;
} fs_complex;

typedef struct fs_bounds {
  double lower;
  double upper;
} fs_bounds;

typedef struct fs_certificate {
  fs_bounds bounds; /* optimal bounds: extreme eigenvalues of S */
  double width;
  int is_tight;
  int is_parseval;
} fs_certificate;

typedef struct fs_predicted {
  double lower;
  double upper;
  int condition_holds; /* 1 iff condition_margin > 0 */
  double condition_margin;
} fs_predicted;

typedef struct fs_cert_report {
  fs_predicted predicted;
  fs_bounds exact;
  int certified;
  double lower_slack; /* exact.lower - predicted.lower */
  double upper_slack; /* predicted.upper - exact.upper */
  double predicted_width;
  double exact_width;
} fs_cert_report;

typedef enum fs_piece_kind { FS_PIECE_AFFINE = 0, FS_PIECE_SQRT_AFFINE = 1 } fs_piece_kind;

/* alpha*x + beta, or sqrt(alpha*x + beta), on [lo, hi). */
typedef struct fs_piece {
  double lo;
  double hi;
  fs_piece_kind kind;
  double alpha;
  double beta;
} fs_piece;

typedef struct fs_lattice {
  double a;
  double b;
} fs_lattice;

typedef struct fs_wh_params {
  double P;
  double Q;
  double p0;
  double q0;
} fs_wh_params;

typedef struct fs_gabor_mapping {
  fs_lattice lattice;
  int modulation_sign;
  int translation_sign;
} fs_gabor_mapping;

typedef struct fs_gabor_estimate {
  double A;
  double B;
  int g1_identically_zero;
  int exact;
  size_t grid_points; /* 0 when the closed form was used */
} fs_gabor_estimate;

typedef struct fs_record {
  size_t k;
  double error;
  double envelope;
} fs_record;

typedef struct fs_frame fs_frame;
typedef struct fs_matrix fs_matrix;
typedef struct fs_generator fs_generator;
typedef struct fs_run fs_run;

/* ---- diagnostics ---------------------------------------------------- */

FS_API const char* fs_last_error(void);
FS_API const char* fs_status_name(fs_status status);
FS_API const char* fs_version(void);

/* ---- matrices ------------------------------------------------------- */

FS_API fs_status fs_matrix_create(size_t rows, size_t cols, const fs_complex* entries, fs_matrix** out);
FS_API void fs_matrix_destroy(fs_matrix* m);
FS_API size_t fs_matrix_rows(const fs_matrix* m);
FS_API size_t fs_matrix_cols(const fs_matrix* m);
FS_API fs_status fs_matrix_entries(const fs_matrix* m, fs_complex* out, size_t capacity);

/* Ascending eigenvalues (n entries) and, when eigenvectors != NULL, the
   matrix whose columns are the matching orthonormal eigenvectors. */
FS_API fs_status fs_matrix_hermitian_eig(const fs_matrix* m, double* eigenvalues, size_t capacity,
                                         fs_matrix** eigenvectors);
FS_API fs_status fs_matrix_extreme_singular_values(const fs_matrix* m, double* sigma_min, double* sigma_max);
FS_API fs_status fs_matrix_solve_hpd(const fs_matrix* m, const fs_complex* b, size_t n, fs_complex* x);

/* ---- frames --------------------------------------------------------- */

FS_API fs_status fs_frame_create(size_t dim, size_t count, const fs_complex* vectors, fs_frame** out);
FS_API void fs_frame_destroy(fs_frame* frame);
FS_API size_t fs_frame_dim(const fs_frame* frame);
FS_API size_t fs_frame_count(const fs_frame* frame);
/* Copies count*dim entries. */
FS_API fs_status fs_frame_vectors(const fs_frame* frame, fs_complex* out, size_t capacity);

FS_API fs_status fs_frame_operator(const fs_frame* frame, fs_matrix** out);
/* out receives count coefficients <f, f_k>. */
FS_API fs_status fs_frame_analysis(const fs_frame* frame, const fs_complex* f, size_t dim, fs_complex* out,
                                   size_t capacity);
FS_API fs_status fs_frame_exact_bounds(const fs_frame* frame, fs_certificate* out);
FS_API fs_status fs_frame_canonical_dual(const fs_frame* frame, fs_frame** out);
FS_API fs_status fs_frame_verify_dual(const fs_frame* frame, const fs_frame* candidate, size_t trials, uint64_t seed,
                                      int* is_dual, double* max_residual);
FS_API fs_status fs_frame_tight_reconstruct(const fs_frame* frame, double tight_bound, const fs_complex* f,
                                            size_t dim, fs_complex* out);

FS_API fs_status fs_width(fs_bounds bounds, double* out);
/* Four decimals, truncated; writes a NUL-terminated string. */
FS_API fs_status fs_width_render4(double width, char* out, size_t capacity);
FS_API fs_status fs_random_unit_vector(size_t dim, uint64_t seed, fs_complex* out);

/* ---- sums of frames ------------------------------------------------- */

/* pivot is zero-based. */
FS_API fs_status fs_finite_sum_predict(const fs_bounds* bounds, const fs_complex* coefficients, size_t k,
                                       size_t pivot, fs_predicted* out);
FS_API fs_status fs_finite_sum_predict_best(const fs_bounds* bounds, const fs_complex* coefficients, size_t k,
                                            size_t* pivot, fs_predicted* out);
FS_API fs_status fs_dual_sum_predict(fs_bounds b1, fs_bounds b2, fs_predicted* out);
/* m1, m2, norm1, norm2 may be NULL; when given they are cross-checked
   against the singular values of theta1, theta2. */
FS_API fs_status fs_operator_sum_predict(const fs_frame* frame1, const fs_frame* frame2, const fs_matrix* theta1,
                                         const fs_matrix* theta2, const double* m1, const double* m2,
                                         const double* norm1, const double* norm2, fs_bounds b1, fs_bounds b2,
                                         fs_predicted* out);
FS_API fs_status fs_perturbed_sum_predict(const fs_complex* alpha, size_t alpha_len, const fs_complex* beta,
                                          size_t beta_len, fs_bounds b1, fs_bounds b2, fs_predicted* out);

FS_API fs_status fs_build_sum_frame(const fs_frame* const* frames, const fs_complex* coefficients, size_t k,
                                    fs_frame** out);
FS_API fs_status fs_build_operator_sum_frame(const fs_frame* frame1, const fs_frame* frame2,
                                             const fs_matrix* theta1, const fs_matrix* theta2, fs_frame** out);
FS_API fs_status fs_build_perturbed_sum_frame(const fs_complex* alpha, const fs_complex* beta, size_t count,
                                              const fs_frame* frame1, const fs_frame* frame2, fs_frame** out);

FS_API fs_status fs_certify(const fs_predicted* predicted, const fs_frame* actual, fs_cert_report* out);

/* ---- Gabor ---------------------------------------------------------- */

FS_API fs_status fs_generator_create(const fs_piece* pieces, size_t count, fs_generator** out);
FS_API void fs_generator_destroy(fs_generator* gen);
FS_API fs_status fs_generator_eval(const fs_generator* gen, double x, double* out);
FS_API fs_status fs_gabor_g0(const fs_generator* gen, double a, double x, double* out);
FS_API fs_status fs_gabor_g1(const fs_generator* gen, fs_lattice lattice, double x, double* out);
FS_API fs_status fs_gabor_estimate_bounds(const fs_generator* gen, fs_lattice lattice, fs_gabor_estimate* out);
FS_API fs_status fs_wh_to_gabor(fs_wh_params wh, fs_gabor_mapping* out);
FS_API fs_status fs_wh_phase(fs_wh_params wh, long m, long n, fs_complex* out);
/* f sampled at x0 + i*step, i < count. */
FS_API fs_status fs_wh_modulus_check(const fs_generator* gen, fs_wh_params wh, double x0, double step,
                                     const fs_complex* samples, size_t count, long m, long n, double* residual);

/* ---- frame algorithm ------------------------------------------------ */

/* stop_tol < 0 selects the default 1e-12 * ||target||. */
FS_API fs_status fs_algo_run(const fs_frame* frame, fs_bounds bounds_used, size_t max_iters, double stop_tol,
                             const fs_complex* target, size_t dim, fs_run** out);
FS_API void fs_run_destroy(fs_run* run);
FS_API size_t fs_run_length(const fs_run* run);
FS_API fs_status fs_run_records(const fs_run* run, fs_record* out, size_t capacity);
/* Final iterate psi_K (dim entries). */
FS_API fs_status fs_run_iterate(const fs_run* run, fs_complex* out, size_t capacity);

#ifdef __cplusplus
}
#endif

#endif /* FRAMESUM_FRAMESUM_H */
