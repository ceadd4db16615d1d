#ifndef TRACEFORM_H
#define TRACEFORM_H

/* Generated by cbindgen from traceform-capi. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum TfStatus {
  TF_STATUS_OK = 0,
  TF_STATUS_NULL_POINTER = 1,
  TF_STATUS_INVALID_ARGUMENT = 2,
  TF_STATUS_COINCIDENT_POINTS = 3,
  TF_STATUS_DIMENSION_MISMATCH = 4,
  TF_STATUS_INADMISSIBLE_MEASURE = 5,
  TF_STATUS_SINGULAR_SYSTEM = 6,
  TF_STATUS_CONVERGENCE_FAILURE = 7,
  TF_STATUS_BRACKET_FAILURE = 8,
  TF_STATUS_INTERNAL_ERROR = 9,
} TfStatus;

/**
 * Opaque evaluation-grid handle.
 */
typedef struct TfGrid TfGrid;

/**
 * Opaque Green-kernel handle.
 */
typedef struct TfKernel TfKernel;

/**
 * Opaque measure handle (atomic or concentric spheres).
 */
typedef struct TfMeasure TfMeasure;

/**
 * Opaque handle to the symmetric potential matrix `S = D^{1/2} G D^{1/2}`.
 */
typedef struct TfOperator TfOperator;

/**
 * Opaque spectral-decomposition handle.
 */
typedef struct TfSpectrum TfSpectrum;

/**
 * Opaque stationary-solution handle.
 */
typedef struct TfStationaryField TfStationaryField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error description for this thread, or NULL when no error occurred.
 */
const char *tf_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tf_version(void);

/**
 * `G(x,y) = e^{-|x-y|}/2` on the line.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum TfStatus tf_kernel_exponential1d(struct TfKernel **out);

/**
 * Newtonian kernel in dimension `d >= 3`.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum TfStatus tf_kernel_newtonian(uint32_t d, struct TfKernel **out);

/**
 * Riesz kernel of order `alpha` in dimension `d`.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum TfStatus tf_kernel_riesz(uint32_t d, double alpha, struct TfKernel **out);

/**
 * Ambient dimension of the kernel (0 on NULL).
 *
 * # Safety
 * `kernel` must be a live handle from a `tf_kernel_*` constructor or NULL.
 */
size_t tf_kernel_dim(const struct TfKernel *kernel);

/**
 * Evaluate `G(x, y)` for `dim`-dimensional points.
 *
 * # Safety
 * `x` and `y` must point to `dim` doubles; `out` must be valid.
 */
enum TfStatus tf_kernel_eval(const struct TfKernel *kernel,
                             const double *x,
                             const double *y,
                             size_t dim,
                             double *out);

/**
 * Singularity triple `(beta, c, r0)` with `G <= c rho^{-beta}` below `r0`.
 *
 * # Safety
 * All out-pointers must be valid.
 */
enum TfStatus tf_kernel_singularity(const struct TfKernel *kernel,
                                    double *beta,
                                    double *c_bound,
                                    double *r0);

/**
 * # Safety
 * `kernel` must come from a `tf_kernel_*` constructor (NULL is a no-op).
 */
void tf_kernel_free(struct TfKernel *kernel);

/**
 * Finite atomic measure from `len` points of dimension `dim` (row-major)
 * with strictly positive weights.
 *
 * # Safety
 * `points` must hold `len * dim` doubles, `weights` `len` doubles, and
 * `out` must be valid.
 */
enum TfStatus tf_measure_atomic(const double *points,
                                const double *weights,
                                size_t len,
                                size_t dim,
                                struct TfMeasure **out);

/**
 * Concentric-sphere measure in R^3 from radii and masses.
 *
 * # Safety
 * `radii` and `masses` must hold `len` doubles; `out` must be valid.
 */
enum TfStatus tf_measure_spheres(const double *radii,
                                 const double *masses,
                                 size_t len,
                                 struct TfMeasure **out);

/**
 * Total mass (NaN on NULL).
 *
 * # Safety
 * `measure` must be a live handle or NULL.
 */
double tf_measure_total_mass(const struct TfMeasure *measure);

/**
 * Number of atoms / spheres (0 on NULL).
 *
 * # Safety
 * `measure` must be a live handle or NULL.
 */
size_t tf_measure_support_len(const struct TfMeasure *measure);

/**
 * # Safety
 * `measure` must come from a `tf_measure_*` constructor (NULL is a no-op).
 */
void tf_measure_free(struct TfMeasure *measure);

/**
 * Uniform 1-D grid on `[lo, hi]`.
 *
 * # Safety
 * `out` must be valid.
 */
enum TfStatus tf_grid_line(double lo, double hi, double step, struct TfGrid **out);

/**
 * Radial grid `(r, 0, 0)` in R^3 for `r` on `[lo, hi]`.
 *
 * # Safety
 * `out` must be valid.
 */
enum TfStatus tf_grid_radial(double lo, double hi, double step, struct TfGrid **out);

/**
 * # Safety
 * `grid` must come from a `tf_grid_*` constructor (NULL is a no-op).
 */
void tf_grid_free(struct TfGrid *grid);

/**
 * Assemble the potential matrix of an admissible (kernel, measure) pair.
 *
 * # Safety
 * `kernel` and `measure` must be live handles; `out` must be valid.
 */
enum TfStatus tf_operator_new(const struct TfKernel *kernel,
                              const struct TfMeasure *measure,
                              struct TfOperator **out);

/**
 * Matrix size (0 on NULL).
 *
 * # Safety
 * `op` must be a live handle or NULL.
 */
size_t tf_operator_size(const struct TfOperator *op);

/**
 * Entry `S[i][j]`.
 *
 * # Safety
 * `op` must be live; `out` must be valid.
 */
enum TfStatus tf_operator_entry(const struct TfOperator *op, size_t i, size_t j, double *out);

/**
 * # Safety
 * `op` must come from `tf_operator_new` (NULL is a no-op).
 */
void tf_operator_free(struct TfOperator *op);

/**
 * `G^mu u(x)`: potential of the density `u` (one value per support
 * element) at a `dim`-dimensional point `x`.
 *
 * # Safety
 * `u` must hold `u_len` doubles, `x` `dim` doubles; `out` must be valid.
 */
enum TfStatus tf_potential_apply(const struct TfKernel *kernel,
                                 const struct TfMeasure *measure,
                                 const double *u,
                                 size_t u_len,
                                 const double *x,
                                 size_t dim,
                                 double *out);

/**
 * `max_grid G^mu 1` — the potential sup-norm over the grid.
 *
 * # Safety
 * All handles must be live; `out` must be valid.
 */
enum TfStatus tf_potential_one_sup(const struct TfKernel *kernel,
                                   const struct TfMeasure *measure,
                                   const struct TfGrid *grid,
                                   double *out);

/**
 * Two-sided bracket of the best Hardy constant: exact `||K||` below, the
 * potential sup-norm above.
 *
 * # Safety
 * All handles must be live; `lower` and `upper` must be valid.
 */
enum TfStatus tf_hardy_bounds(const struct TfKernel *kernel,
                              const struct TfMeasure *measure,
                              const struct TfGrid *grid,
                              double *lower,
                              double *upper);

/**
 * Apply the resolvent `(I + alpha S)^{-1} S` to `psi` (length = matrix
 * size), writing the result into `out`.
 *
 * # Safety
 * `psi` and `out` must hold `len` doubles matching the operator size.
 */
enum TfStatus tf_resolvent_apply(const struct TfOperator *op,
                                 double alpha,
                                 const double *psi,
                                 size_t len,
                                 double *out);

/**
 * Full eigendecomposition of the operator with the given multiplicity
 * clustering tolerance.
 *
 * # Safety
 * `op` must be live; `out` must be valid.
 */
enum TfStatus tf_spectrum_new(const struct TfOperator *op,
                              double multiplicity_tol,
                              struct TfSpectrum **out);

/**
 * Number of eigenvalues (0 on NULL).
 *
 * # Safety
 * `spectrum` must be a live handle or NULL.
 */
size_t tf_spectrum_size(const struct TfSpectrum *spectrum);

/**
 * Copy the descending eigenvalues of the potential operator.
 *
 * # Safety
 * `buf` must hold at least `len >= tf_spectrum_size` doubles.
 */
enum TfStatus tf_spectrum_lambdas(const struct TfSpectrum *spectrum, double *buf, size_t len);

/**
 * Copy the ascending trace-form energies `E = 1/lambda`.
 *
 * # Safety
 * `buf` must hold at least `len >= tf_spectrum_size` doubles.
 */
enum TfStatus tf_spectrum_energies(const struct TfSpectrum *spectrum, double *buf, size_t len);

/**
 * Copy the orthonormal eigenvector paired with `lambdas[k]`.
 *
 * # Safety
 * `buf` must hold at least `len >= tf_spectrum_size` doubles.
 */
enum TfStatus tf_spectrum_eigenvector(const struct TfSpectrum *spectrum,
                                      size_t k,
                                      double *buf,
                                      size_t len);

/**
 * # Safety
 * `spectrum` must come from `tf_spectrum_new` (NULL is a no-op).
 */
void tf_spectrum_free(struct TfSpectrum *spectrum);

/**
 * First `count` positive zeros of the order-`m` spherical Bessel function.
 *
 * # Safety
 * `buf` must hold `count` doubles.
 */
enum TfStatus tf_spherical_bessel_zeros(uint32_t m, size_t count, double *buf);

/**
 * Degree-`m` eigenvalue of the unit-ball limit spectrum, certified to
 * absolute accuracy `tol`.
 *
 * # Safety
 * All out-pointers must be valid.
 */
enum TfStatus tf_ball_eigenvalue(uint32_t m,
                                 double tol,
                                 double *value,
                                 double *tail_bound,
                                 uint32_t *multiplicity);

/**
 * Estimate of the boundary-shell potential gap for shell index `n`.
 *
 * # Safety
 * `out` must be valid.
 */
enum TfStatus tf_annulus_potential_gap(uint32_t n, size_t quadrature_points, double *out);

/**
 * Cross-validate the lattice trace form against the kernel matrix for
 * weights `a_k` indexed `k = -n..n` (length `2n + 1`).
 *
 * # Safety
 * `weights` must hold `len` doubles; out-pointers must be valid.
 */
enum TfStatus tf_graph1d_cross_validate(const double *weights,
                                        size_t len,
                                        double tol,
                                        double *max_rel_discrepancy,
                                        bool *pass);

/**
 * Solve `-Δu + alpha u mu = f mu` for a concentric-sphere measure with
 * radial data `f` (one value per sphere).
 *
 * # Safety
 * `radii`, `masses`, and `data` must hold `len` doubles; `out` must be
 * valid.
 */
enum TfStatus tf_stationary_solve(const double *radii,
                                  const double *masses,
                                  const double *data,
                                  size_t len,
                                  double alpha,
                                  struct TfStationaryField **out);

/**
 * Field value at radius `r` (NaN on NULL).
 *
 * # Safety
 * `field` must be a live handle or NULL.
 */
double tf_stationary_eval_radial(const struct TfStationaryField *field, double r);

/**
 * # Safety
 * `field` must come from `tf_stationary_solve` (NULL is a no-op).
 */
void tf_stationary_free(struct TfStationaryField *field);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TRACEFORM_H */
