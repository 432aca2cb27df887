#ifndef SPADE_H
#define SPADE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpadeStatus {
  SPADE_STATUS_OK = 0,
  SPADE_STATUS_NULL_POINTER = 1,
  SPADE_STATUS_INVALID_PARAMETER = 2,
  SPADE_STATUS_DATA_ERROR = 3,
  SPADE_STATUS_NUMERICAL_ERROR = 4,
  SPADE_STATUS_MODEL_ERROR = 5,
  SPADE_STATUS_CONFIG_ERROR = 6,
  SPADE_STATUS_IO_ERROR = 7,
  SPADE_STATUS_PANIC = 99,
} SpadeStatus;

typedef enum SpadePsfKind {
  SPADE_PSF_KIND_GAUSSIAN = 0,
  SPADE_PSF_KIND_SINC = 1,
} SpadePsfKind;

/**
 * Opaque two-mode projection measurement.
 */
typedef struct SpadeProjection SpadeProjection;

/**
 * Opaque point-spread function.
 */
typedef struct SpadePsf SpadePsf;

/**
 * Outcome probabilities of the two-mode projection at one separation.
 */
typedef struct SpadeProbabilities {
  double delta;
  double p_0;
  double p_a;
  double p_lost;
} SpadeProbabilities;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL.
 *
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *spade_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *spade_version(void);

/**
 * Creates a built-in PSF of width σ (Gaussian) or w (sinc).
 *
 * # Safety
 * `out` must be valid for writes. Release the handle with [`spade_psf_free`].
 */
enum SpadeStatus spade_psf_new(enum SpadePsfKind kind, double width, struct SpadePsf **out);

/**
 * Creates a PSF from `n` amplitude samples `amps[i]` at positions `xs[i]`.
 *
 * # Safety
 * `xs` and `amps` must point to `n` readable doubles; `out` must be valid
 * for writes.
 */
enum SpadeStatus spade_psf_tabulated(const double *xs,
                                     const double *amps,
                                     size_t n,
                                     struct SpadePsf **out);

/**
 * # Safety
 * `psf` must be NULL or a handle from this library not yet freed.
 */
void spade_psf_free(struct SpadePsf *psf);

/**
 * # Safety
 * `psf` must be a live handle and `out` valid for writes.
 */
enum SpadeStatus spade_psf_width(const struct SpadePsf *psf, double *out);

/**
 * Quantum Fisher information per photon with respect to the separation.
 *
 * # Safety
 * `psf` must be a live handle and `out` valid for writes.
 */
enum SpadeStatus spade_quantum_fisher(const struct SpadePsf *psf, double *out);

/**
 * # Safety
 * `psf` must be a live handle and `out` valid for writes.
 */
enum SpadeStatus spade_qcrlb(const struct SpadePsf *psf, uint64_t n_photons, double *out);

/**
 * Classical Fisher information per photon of ideal direct imaging.
 *
 * # Safety
 * `psf` must be a live handle and `out` valid for writes.
 */
enum SpadeStatus spade_classical_fisher(const struct SpadePsf *psf, double delta, double *out);

/**
 * Coefficient c in F_cl(δ) ≈ c·δ²; `divergent` is set to 1 when the
 * integral does not converge.
 *
 * # Safety
 * `psf` must be a live handle; `out` and `divergent` valid for writes.
 */
enum SpadeStatus spade_classical_fisher_smalld(const struct SpadePsf *psf,
                                               double *out,
                                               int32_t *divergent);

/**
 * Classical Fisher information of a camera with `n_pixels` pixels of
 * width `pixel_width` centred on the axis.
 *
 * # Safety
 * `psf` must be a live handle and `out` valid for writes.
 */
enum SpadeStatus spade_pixelated_fisher(const struct SpadePsf *psf,
                                        double delta,
                                        double pixel_width,
                                        size_t n_pixels,
                                        double *out);

/**
 * Builds the PSF-mode / antisymmetric-mode projection for `psf`.
 *
 * # Safety
 * `psf` must be a live handle and `out` valid for writes. Release the
 * result with [`spade_projection_free`].
 */
enum SpadeStatus spade_projection_new(const struct SpadePsf *psf, struct SpadeProjection **out);

/**
 * # Safety
 * `model` must be NULL or a handle from this library not yet freed.
 */
void spade_projection_free(struct SpadeProjection *model);

/**
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SpadeStatus spade_projection_probabilities(const struct SpadeProjection *model,
                                                double delta,
                                                struct SpadeProbabilities *out);

/**
 * Per-photon Fisher information of the binary antisymmetric projection.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SpadeStatus spade_projection_binary_fisher(const struct SpadeProjection *model,
                                                double delta,
                                                double *out);

/**
 * Upper end of the separation range the estimator can return.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SpadeStatus spade_projection_branch_peak(const struct SpadeProjection *model, double *out);

/**
 * Separation estimate from the counts in the two monitored modes.
 *
 * # Safety
 * `model` must be a live handle; `delta_hat` and `clamped` valid for writes.
 */
enum SpadeStatus spade_estimate_projection(const struct SpadeProjection *model,
                                           uint64_t n_0,
                                           uint64_t n_a,
                                           double *delta_hat,
                                           int32_t *clamped);

/**
 * Runs a sweep described by a configuration text and returns the CSV
 * table. `workers` = 0 uses the default worker count.
 *
 * # Safety
 * `config` must be a NUL-terminated string and `out` valid for writes. The
 * returned string must be released with [`spade_string_free`].
 */
enum SpadeStatus spade_sweep_csv(const char *config, size_t workers, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library not yet freed.
 */
void spade_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPADE_H */
