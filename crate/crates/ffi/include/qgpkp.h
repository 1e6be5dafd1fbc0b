#ifndef QGPKP_H
#define QGPKP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QgpkpStatus {
  QGPKP_STATUS_OK = 0,
  QGPKP_STATUS_NULL_POINTER = 1,
  QGPKP_STATUS_DOMAIN = 2,
  QGPKP_STATUS_CONTRACT = 3,
  QGPKP_STATUS_NONEXISTENT_SOLITON = 4,
  QGPKP_STATUS_DISPERSIONLESS = 5,
  QGPKP_STATUS_UNSUPPORTED_DEGENERACY = 6,
  QGPKP_STATUS_NON_MONOTONIC = 7,
  QGPKP_STATUS_INSUFFICIENT_HISTORY = 8,
  QGPKP_STATUS_DIVERGED = 9,
  QGPKP_STATUS_UNVERIFIED = 10,
  QGPKP_STATUS_CONFIG = 11,
  QGPKP_STATUS_USAGE = 12,
  QGPKP_STATUS_IO = 13,
  QGPKP_STATUS_BUFFER_TOO_SMALL = 14,
  QGPKP_STATUS_PANIC = 15,
} QgpkpStatus;

// Wave equation selector, mirroring `WaveEquationKind`.
typedef enum QgpkpEquation {
  QGPKP_EQUATION_KP_CART = 0,
  QGPKP_EQUATION_CKP_CYL = 1,
  QGPKP_EQUATION_KDV = 2,
  QGPKP_EQUATION_BREAKING_WAVE_MIT = 3,
  QGPKP_EQUATION_BREAKING_WAVE_FULL = 4,
  QGPKP_EQUATION_KP_CART_NR = 5,
  QGPKP_EQUATION_CKP_CYL_NR = 6,
} QgpkpEquation;

// Opaque handle to a background medium.
typedef struct QgpkpMedium QgpkpMedium;

typedef struct QgpkpCoefficients {
  // fm^-4
  double a;
  double cs;
  double cs2;
  double alpha;
  // fm^2
  double beta;
  // fm^-1
  double m_eff;
} QgpkpCoefficients;

typedef struct QgpkpWaveSpec {
  double cs;
  double alpha;
  double beta;
  double transverse_coeff;
} QgpkpWaveSpec;

typedef struct QgpkpExistence {
  // 1 when both conditions hold.
  int32_t admissible;
  double margin_speed;
  double amplitude;
} QgpkpExistence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *qgpkp_version(void);

// Length in bytes of the last error message of this thread, without the NUL;
// 0 when the last call succeeded.
size_t qgpkp_last_error_length(void);

// Copies the last error message (NUL-terminated, truncated to fit) into `buf`
// and returns the full message length without the NUL.
//
// # Safety
// `buf` must be NULL or point to `len` writable bytes.
size_t qgpkp_last_error_message(char *buf, size_t len);

// Creates a medium with `γ_Q = 6`. `m_g_mev` is in MeV, `bag` in fm⁻⁴ and
// `rho0` in fm⁻³.
//
// # Safety
// `out` must be a valid pointer; on success it receives a handle to free with
// [`qgpkp_medium_free`].
enum QgpkpStatus qgpkp_medium_new(double g,
                                  double m_g_mev,
                                  double bag,
                                  double rho0,
                                  struct QgpkpMedium **out);

// Releases a handle; NULL is ignored.
//
// # Safety
// `h` must come from [`qgpkp_medium_new`] and not be used afterwards.
void qgpkp_medium_free(struct QgpkpMedium *h);

// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum QgpkpStatus qgpkp_medium_coefficients(const struct QgpkpMedium *h,
                                           struct QgpkpCoefficients *out);

// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum QgpkpStatus qgpkp_wave_spec(const struct QgpkpMedium *h,
                                 enum QgpkpEquation kind,
                                 struct QgpkpWaveSpec *out);

// Existence of the cylindrical soliton with direction constant `a` and speed `u`.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum QgpkpStatus qgpkp_existence_cyl(const struct QgpkpMedium *h,
                                     double a,
                                     double u,
                                     struct QgpkpExistence *out);

// Existence of the cartesian soliton `(𝒜, 𝒞, U)`.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum QgpkpStatus qgpkp_existence_cart(const struct QgpkpMedium *h,
                                      double a_dir,
                                      double c_dir,
                                      double u,
                                      struct QgpkpExistence *out);

// Cylindrical soliton at the `n` points `(r[i], phi[i], z[i])` and time `t > 0`.
//
// # Safety
// `h` must be a live handle; `r`, `phi`, `z` and `out` must hold `n` values.
enum QgpkpStatus qgpkp_ckp_eval(const struct QgpkpMedium *h,
                                double a,
                                double u,
                                const double *r,
                                const double *phi,
                                const double *z,
                                double t,
                                size_t n,
                                double *out);

// Cartesian soliton at the `n` points `(x[i], y[i], z[i])` and time `t`; with
// `consistent != 0` the exact line-soliton phase speed is used instead of `U`.
//
// # Safety
// `h` must be a live handle; `x`, `y`, `z` and `out` must hold `n` values.
enum QgpkpStatus qgpkp_kp_eval(const struct QgpkpMedium *h,
                               double a_dir,
                               double c_dir,
                               double u,
                               int32_t consistent,
                               const double *x,
                               const double *y,
                               const double *z,
                               double t,
                               size_t n,
                               double *out);

// Integrates the KdV equation of the medium for `t_end` fm with RK4 on a periodic
// line of length `length`. `values` holds the `n` initial samples (n a power of
// two) and receives the final state.
//
// # Safety
// `h` must be a live handle and `values` must hold `n` values.
enum QgpkpStatus qgpkp_kdv_evolve(const struct QgpkpMedium *h,
                                  double *values,
                                  size_t n,
                                  double length,
                                  double dt,
                                  double t_end);

// Name of a status code as a static NUL-terminated string.
const char *qgpkp_status_name(enum QgpkpStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QGPKP_H */
