#ifndef CPMGLUE_H
#define CPMGLUE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CpmStatus {
  Ok = 0,
  /**
   * A pointer argument was null.
   */
  NullPointer = 1,
  /**
   * Malformed dimensions, non-finite entries or other invalid input.
   */
  InvalidInput = 2,
  NotCompletelyPositive = 3,
  NotSubspacePreserving = 4,
  InvalidGluingMatrix = 5,
  NotARepresentation = 6,
  NotAGluingOfThese = 7,
  NotInGluingFamily = 8,
  NotLsp = 9,
  /**
   * Any other mathematical verdict failure.
   */
  MathError = 10,
  /**
   * An unexpected internal failure.
   */
  InternalError = 11,
} CpmStatus;

/**
 * Opaque channel handle.
 */
typedef struct CpmChannel CpmChannel;

/**
 * CP/TP classification report of a channel.
 */
typedef struct CpmClassification {
  bool is_cp;
  bool is_tp;
  uintptr_t kraus_number;
  double tp_residual;
  double min_choi_eigenvalue;
} CpmClassification;

/**
 * Orthogonal split of source and target spaces into two blocks.
 */
typedef struct CpmSplit {
  uintptr_t s1_dim;
  uintptr_t s2_dim;
  uintptr_t t1_dim;
  uintptr_t t2_dim;
} CpmSplit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a channel from `kraus_count` stacked `target_dim x source_dim`
 * operators. `data` holds `kraus_count * target_dim * source_dim`
 * row-major complex entries as interleaved doubles.
 *
 * # Safety
 * `data` must point to `kraus_count * target_dim * source_dim * 2`
 * doubles; `out` must be a valid pointer.
 */
enum CpmStatus cpm_channel_new(uintptr_t source_dim,
                               uintptr_t target_dim,
                               uintptr_t kraus_count,
                               const double *data,
                               struct CpmChannel **out);

/**
 * Releases a channel handle. Null is ignored.
 *
 * # Safety
 * `channel` must be null or a pointer returned by this library that has
 * not been freed yet.
 */
void cpm_channel_free(struct CpmChannel *channel);

/**
 * Source dimension; 0 for a null handle.
 *
 * # Safety
 * `channel` must be null or a live handle.
 */
uintptr_t cpm_channel_source_dim(const struct CpmChannel *channel);

/**
 * Target dimension; 0 for a null handle.
 *
 * # Safety
 * `channel` must be null or a live handle.
 */
uintptr_t cpm_channel_target_dim(const struct CpmChannel *channel);

/**
 * Number of stored Kraus operators; 0 for a null handle.
 *
 * # Safety
 * `channel` must be null or a live handle.
 */
uintptr_t cpm_channel_kraus_count(const struct CpmChannel *channel);

/**
 * Copies Kraus operator `index` into `out`
 * (`target_dim * source_dim * 2` doubles, row-major interleaved).
 *
 * # Safety
 * `channel` must be a live handle and `out` sized as documented.
 */
enum CpmStatus cpm_channel_kraus(const struct CpmChannel *channel, uintptr_t index, double *out);

/**
 * Classifies the channel (CP, TP, Kraus number, residuals).
 *
 * # Safety
 * `channel` must be a live handle; `out` a valid pointer.
 */
enum CpmStatus cpm_channel_classify(const struct CpmChannel *channel,
                                    struct CpmClassification *out);

/**
 * Applies the channel to a `source_dim x source_dim` operator and writes
 * the `target_dim x target_dim` output.
 *
 * # Safety
 * `state` must hold `source_dim^2 * 2` doubles and `out`
 * `target_dim^2 * 2` doubles.
 */
enum CpmStatus cpm_channel_apply(const struct CpmChannel *channel,
                                 const double *state,
                                 double *out);

/**
 * Trace-norm-based distance between the Choi matrices of two channels.
 *
 * # Safety
 * Both handles must be live; `out` a valid pointer.
 */
enum CpmStatus cpm_channel_distance(const struct CpmChannel *a,
                                    const struct CpmChannel *b,
                                    double *out);

/**
 * Whether the channel preserves the two subspaces of `split` at
 * tolerance `tol`.
 *
 * # Safety
 * `channel` must be a live handle; `out` a valid pointer.
 */
enum CpmStatus cpm_channel_is_sp(const struct CpmChannel *channel,
                                 struct CpmSplit split,
                                 double tol,
                                 bool *out);

/**
 * Returns the same map with a linearly independent Kraus representation
 * as a new handle.
 *
 * # Safety
 * `channel` must be a live handle; `out` a valid pointer.
 */
enum CpmStatus cpm_channel_li_kraus(const struct CpmChannel *channel, struct CpmChannel **out);

/**
 * Builds the gluing of `phi1` and `phi2` from the `rows x cols`
 * coefficient matrix `c`, taken relative to the canonical linearly
 * independent representations of the two channels.
 *
 * # Safety
 * The handles must be live; `c` must hold `rows * cols * 2` doubles;
 * `out` must be a valid pointer.
 */
enum CpmStatus cpm_build_gluing(const struct CpmChannel *phi1,
                                const struct CpmChannel *phi2,
                                const double *c,
                                uintptr_t rows,
                                uintptr_t cols,
                                struct CpmSplit split,
                                struct CpmChannel **out);

/**
 * Recovers the gluing matrix of `phi` relative to the canonical
 * representations of `phi1` and `phi2`. `c_out` must hold
 * `c_capacity` doubles; on success `rows_out x cols_out` complex
 * entries (`rows_out * cols_out * 2` doubles) are written.
 *
 * # Safety
 * The handles must be live; `c_out` must hold `c_capacity` doubles;
 * `rows_out` and `cols_out` must be valid pointers.
 */
enum CpmStatus cpm_extract_gluing(const struct CpmChannel *phi,
                                  const struct CpmChannel *phi1,
                                  const struct CpmChannel *phi2,
                                  struct CpmSplit split,
                                  double *c_out,
                                  uintptr_t c_capacity,
                                  uintptr_t *rows_out,
                                  uintptr_t *cols_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CPMGLUE_H */
