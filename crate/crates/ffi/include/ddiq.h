#ifndef DDIQ_H
#define DDIQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DdiqStatus {
  DDIQ_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  DDIQ_STATUS_NULL_ARGUMENT = 1,
  /*
   Invalid input: malformed graph, bad parameter, unknown name.
   */
  DDIQ_STATUS_VALIDATION = 2,
  /*
   The instance exceeds the qubit limit.
   */
  DDIQ_STATUS_RESOURCE_GUARD = 3,
  DDIQ_STATUS_IO = 4,
  /*
   A string argument was not valid UTF-8.
   */
  DDIQ_STATUS_UTF8 = 5,
  /*
   An output buffer was too small; the required length was still reported.
   */
  DDIQ_STATUS_BUFFER_TOO_SMALL = 6,
  DDIQ_STATUS_PANIC = 7,
} DdiqStatus;

typedef struct DdiqGraph DdiqGraph;

typedef struct DdiqModel DdiqModel;

typedef struct DdiqRun DdiqRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the most recent failure on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *ddiq_last_error(void);

/*
 Releases a string returned by this library.

 # Safety
 `s` must be null or a pointer obtained from a `ddiq_*_to_json` call.
 */
void ddiq_string_free(char *s);

/*
 Parses an interaction graph from a JSON document.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum DdiqStatus ddiq_graph_from_json(const char *json, struct DdiqGraph **out);

/*
 Loads a built-in dataset (`"sixdrug"` or `"covid9"`).

 # Safety
 `name` must be a NUL-terminated string; `out` must be writable.
 */
enum DdiqStatus ddiq_graph_builtin(const char *name, struct DdiqGraph **out);

/*
 Number of drugs in the graph; 0 for a null handle.

 # Safety
 `graph` must be null or a live handle.
 */
size_t ddiq_graph_drug_count(const struct DdiqGraph *graph);

/*
 # Safety
 `graph` must be a live handle; `out` must be writable.
 */
enum DdiqStatus ddiq_graph_to_json(const struct DdiqGraph *graph, char **out);

/*
 # Safety
 `graph` must be null or a handle not yet freed.
 */
void ddiq_graph_free(struct DdiqGraph *graph);

/*
 Compiles the maximum-safe-subset objective with harm penalty `alpha`.

 # Safety
 `graph` must be a live handle; `out` must be writable.
 */
enum DdiqStatus ddiq_model_mss(const struct DdiqGraph *graph, double alpha, struct DdiqModel **out);

/*
 Compiles the synergy-constrained objective selecting `k` drugs.

 # Safety
 `graph` must be a live handle; `out` must be writable.
 */
enum DdiqStatus ddiq_model_sco(const struct DdiqGraph *graph,
                               double gamma,
                               double mu,
                               size_t k,
                               struct DdiqModel **out);

/*
 Number of qubits; 0 for a null handle.

 # Safety
 `model` must be null or a live handle.
 */
size_t ddiq_model_qubits(const struct DdiqModel *model);

/*
 # Safety
 `model` must be a live handle; `out` must be writable.
 */
enum DdiqStatus ddiq_model_to_json(const struct DdiqModel *model, char **out);

/*
 Energy of one assignment given as `len` bytes of 0 or 1, drug 0 first.

 # Safety
 `bits` must point to `len` readable bytes; `out` must be writable.
 */
enum DdiqStatus ddiq_model_energy(const struct DdiqModel *model,
                                  const uint8_t *bits,
                                  size_t len,
                                  double *out);

/*
 # Safety
 `model` must be null or a handle not yet freed.
 */
void ddiq_model_free(struct DdiqModel *model);

/*
 Exhaustive ground-state search.

 Writes the ground energy and the number of minimizers to `count`. Up to
 `capacity` minimizer basis indices go to `indices` (bit i is drug i);
 returns `BufferTooSmall` if more exist. `indices` may be null when
 `capacity` is 0.

 # Safety
 `indices` must have room for `capacity` values; the other outputs must be writable.
 */
enum DdiqStatus ddiq_exact_solve(const struct DdiqModel *model,
                                 double *ground_energy,
                                 uint64_t *indices,
                                 size_t capacity,
                                 size_t *count);

/*
 Runs FALQON from the uniform superposition.

 # Safety
 `model` must be a live handle; `out` must be writable.
 */
enum DdiqStatus ddiq_run_falqon(const struct DdiqModel *model,
                                double dt,
                                size_t steps,
                                double beta_init,
                                struct DdiqRun **out);

/*
 Runs FALQON with an imaginary-time filter of strength `dtau` every
 `ite_period` steps.

 # Safety
 `model` must be a live handle; `out` must be writable.
 */
enum DdiqStatus ddiq_run_ite_falqon(const struct DdiqModel *model,
                                    double dt,
                                    size_t steps,
                                    double beta_init,
                                    double dtau,
                                    size_t ite_period,
                                    struct DdiqRun **out);

/*
 Number of recorded steps; 0 for a null handle.

 # Safety
 `run` must be null or a live handle.
 */
size_t ddiq_run_steps(const struct DdiqRun *run);

/*
 Expected energy after the last step.

 # Safety
 `run` must be a live handle; `out` must be writable.
 */
enum DdiqStatus ddiq_run_final_energy(const struct DdiqRun *run, double *out);

/*
 Copies the per-step control values, energies and filter flags. Any
 output may be null to skip it; non-null ones need `capacity >=
 ddiq_run_steps(run)`.

 # Safety
 Each non-null buffer must have room for `capacity` values.
 */
enum DdiqStatus ddiq_run_trajectory(const struct DdiqRun *run,
                                    double *betas,
                                    double *energies,
                                    uint8_t *ite_applied,
                                    size_t capacity);

/*
 Copies the final measurement distribution over all 2^n basis states.

 # Safety
 `out` must have room for `capacity` values.
 */
enum DdiqStatus ddiq_run_probabilities(const struct DdiqRun *run, double *out, size_t capacity);

/*
 # Safety
 `run` must be null or a handle not yet freed.
 */
void ddiq_run_free(struct DdiqRun *run);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DDIQ_H */
