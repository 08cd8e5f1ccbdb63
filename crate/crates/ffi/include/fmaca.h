#ifndef FMACA_H
#define FMACA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FmacaLabel {
  FMACA_LABEL_NONCODING = 0,
  FMACA_LABEL_CODING = 1,
} FmacaLabel;

/**
 * Result code of every fallible call.
 */
typedef enum FmacaStatus {
  FMACA_STATUS_OK = 0,
  FMACA_STATUS_NULL_POINTER = 1,
  FMACA_STATUS_INVALID_ARGUMENT = 2,
  FMACA_STATUS_UNSUPPORTED_RULE = 3,
  FMACA_STATUS_INVALID_STATE = 4,
  FMACA_STATUS_DIMENSION_MISMATCH = 5,
  FMACA_STATUS_NON_CONVERGENT = 6,
  FMACA_STATUS_IO = 7,
  FMACA_STATUS_INVALID_MODEL = 8,
  FMACA_STATUS_INVALID_SEQUENCE = 9,
  FMACA_STATUS_PANIC = 99,
} FmacaStatus;

/**
 * A fuzzy cellular automaton (opaque).
 */
typedef struct FmacaAutomaton FmacaAutomaton;

/**
 * A trained classifier loaded from a model file (opaque).
 */
typedef struct FmacaModel FmacaModel;

/**
 * Summary of the cycle a trajectory settles into.
 */
typedef struct FmacaAttractor {
  size_t transient_length;
  size_t period;
  /**
   * Phase-independent identity of the cycle.
   */
  uint64_t attractor_id;
} FmacaAttractor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *fmaca_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fmaca_version(void);

/**
 * Build an automaton from one rule code per cell.
 *
 * # Safety
 * `rules` must point to `n_cells` readable values and `out` must be a valid
 * pointer.
 */
enum FmacaStatus fmaca_automaton_new(const uint32_t *rules,
                                     size_t n_cells,
                                     struct FmacaAutomaton **out);

/**
 * Release an automaton. NULL is ignored.
 *
 * # Safety
 * `automaton` must come from [`fmaca_automaton_new`] and not be used again.
 */
void fmaca_automaton_free(struct FmacaAutomaton *automaton);

/**
 * Number of cells, or 0 for NULL.
 *
 * # Safety
 * `automaton` must be NULL or a live handle.
 */
size_t fmaca_automaton_cells(const struct FmacaAutomaton *automaton);

/**
 * Write the rule code of every cell into `codes` (length `n_cells`).
 *
 * # Safety
 * `automaton` must be a live handle and `codes` must point to `n_cells`
 * writable values.
 */
enum FmacaStatus fmaca_automaton_rules(const struct FmacaAutomaton *automaton,
                                       uint32_t *codes,
                                       size_t n_cells);

/**
 * One synchronous update of `state` into `next` (both `n_cells` long; they
 * may alias).
 *
 * # Safety
 * `automaton` must be a live handle; `state` readable and `next` writable
 * for `n_cells` values.
 */
enum FmacaStatus fmaca_automaton_step(const struct FmacaAutomaton *automaton,
                                      const double *state,
                                      double *next,
                                      size_t n_cells);

/**
 * Iterate from `state` until the trajectory revisits a state.
 * `max_steps == 0` selects the default budget for the configuration.
 *
 * # Safety
 * `automaton` must be a live handle, `state` readable for `n_cells` values,
 * and `out` a valid pointer.
 */
enum FmacaStatus fmaca_automaton_run(const struct FmacaAutomaton *automaton,
                                     const double *state,
                                     size_t n_cells,
                                     size_t max_steps,
                                     struct FmacaAttractor *out);

/**
 * Load a model file written by `fmaca train`.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FmacaStatus fmaca_model_load(const char *path, struct FmacaModel **out);

/**
 * Release a model. NULL is ignored.
 *
 * # Safety
 * `model` must come from [`fmaca_model_load`] and not be used again.
 */
void fmaca_model_free(struct FmacaModel *model);

/**
 * Window length in bases the model expects, or 0 for NULL.
 *
 * # Safety
 * `model` must be NULL or a live handle.
 */
size_t fmaca_model_window_length(const struct FmacaModel *model);

/**
 * Classify `len` bases (not necessarily NUL-terminated).
 *
 * # Safety
 * `model` must be a live handle, `bases` readable for `len` bytes, and
 * `label` a valid pointer.
 */
enum FmacaStatus fmaca_model_classify(const struct FmacaModel *model,
                                      const char *bases,
                                      size_t len,
                                      enum FmacaLabel *label);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FMACA_H */
