/* Copyright 2026 The nbspec Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the nbspec library. All handles are opaque; every call
 * returns a status code and, on failure, records a message retrievable
 * with nbspec_last_error() on the calling thread. */

#ifndef NBSPEC_H_
#define NBSPEC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(NBSPEC_BUILDING)
#define NBSPEC_API __attribute__((visibility("default")))
#else
#define NBSPEC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nbspec_status {
  NBSPEC_OK = 0,
  NBSPEC_INVALID_ARGUMENT = 1,
  NBSPEC_CAP_EXCEEDED = 2,
  NBSPEC_NUMERICAL = 3,
  NBSPEC_IO = 4,
  /* A Monte-Carlo band or a lemma check of a command failed. The
   * summary is still produced. */
  NBSPEC_STATISTICAL = 5,
  NBSPEC_INTERNAL = 6
} nbspec_status;

typedef struct nbspec_model nbspec_model;
typedef struct nbspec_graph nbspec_graph;

/* Message of the last failed call on this thread; "" if none. */
NBSPEC_API const char* nbspec_last_error(void);
NBSPEC_API const char* nbspec_version(void);
/* Frees strings returned through char** out-parameters. */
NBSPEC_API void nbspec_string_free(char* s);

/* Preset name ("sbm-2x-7-1", "sbm-sym(3,6,1)", ...) or params file path. */
NBSPEC_API nbspec_status nbspec_model_create(const char* preset_or_path,
                                             nbspec_model** out);
/* {"r": int, "pi": [...], "W": [row-major ...]} */
NBSPEC_API nbspec_status nbspec_model_from_json(const char* json,
                                                nbspec_model** out);
NBSPEC_API void nbspec_model_free(nbspec_model* model);
/* Any of the out pointers may be NULL. */
NBSPEC_API nbspec_status nbspec_model_info(const nbspec_model* model,
                                           int* r, int* r0, double* alpha);
/* k-th eigenvalue of the mean progeny matrix, 1-based. */
NBSPEC_API nbspec_status nbspec_model_eigenvalue(const nbspec_model* model,
                                                 int k, double* out);

/* Block-model sample with i.i.d. types. */
NBSPEC_API nbspec_status nbspec_graph_generate(const nbspec_model* model,
                                               int64_t n, uint64_t seed,
                                               nbspec_graph** out);
NBSPEC_API nbspec_status nbspec_graph_read(const char* path,
                                           nbspec_graph** out);
NBSPEC_API nbspec_status nbspec_graph_write(const nbspec_graph* graph,
                                            const char* path);
NBSPEC_API void nbspec_graph_free(nbspec_graph* graph);
NBSPEC_API int64_t nbspec_graph_num_vertices(const nbspec_graph* graph);
NBSPEC_API int64_t nbspec_graph_num_edges(const nbspec_graph* graph);

/* Full spectrum of the non-backtracking matrix, sorted by decreasing
 * modulus. method is "auto", "dense" or "companion". With re == NULL or
 * im == NULL only *count is set to the number of eigenvalues; otherwise
 * *count is the capacity on input and the number written on output. */
NBSPEC_API nbspec_status nbspec_spectrum(const nbspec_graph* graph,
                                         const char* method, double* re,
                                         double* im, size_t* count);

/* The `count` leading eigenvalues by modulus (Arnoldi). re and im must
 * hold `count` entries. */
NBSPEC_API nbspec_status nbspec_leading_eigenvalues(const nbspec_graph* graph,
                                                    int count, double tol,
                                                    uint64_t seed, double* re,
                                                    double* im);

/* Community detection from the k-th eigenvector; labels (0-based types)
 * must hold num_vertices entries. overlap may be NULL. */
NBSPEC_API nbspec_status nbspec_detect(const nbspec_graph* graph,
                                       const nbspec_model* model, int k,
                                       uint64_t seed, int* labels,
                                       double* overlap);

/* Runs a CLI command ("spectrum", "detect", "bp-verify", "diagnostics",
 * "generate") with a JSON config; the summary JSON is returned in
 * *summary_json (free with nbspec_string_free), also on
 * NBSPEC_STATISTICAL. */
NBSPEC_API nbspec_status nbspec_run_command(const char* command,
                                            const char* config_json,
                                            char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* NBSPEC_H_ */
