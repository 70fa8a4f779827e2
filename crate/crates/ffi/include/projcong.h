#ifndef PROJCONG_H
#define PROJCONG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PcMode {
  PC_MODE_PROJECTIONS = 0,
  PC_MODE_SECTIONS = 1,
} PcMode;

typedef enum PcStatus {
  PC_STATUS_OK = 0,
  PC_STATUS_NULL_POINTER = 1,
  PC_STATUS_INVALID_UTF8 = 2,
  // Malformed file, bad dimension, degenerate or non-origin-interior input.
  PC_STATUS_INVALID_INPUT = 3,
  // Sampling or patching failed; another seed or more samples may help.
  PC_STATUS_RETRYABLE = 4,
  // The direction lies on the exceptional set or another precondition failed.
  PC_STATUS_PRECONDITION = 5,
  PC_STATUS_PANIC = 6,
} PcStatus;

// Opaque handle to an exact convex polytope.
typedef struct PcPolytope PcPolytope;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses `{"dim": 3, "vertices": [...]}` and takes the convex hull.
// `float_tol <= 0` rejects floating-point coordinates.
//
// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
enum PcStatus pc_polytope_from_json(const char *json, double float_tol, struct PcPolytope **out);

// # Safety
// `p` must come from [`pc_polytope_from_json`] and not be freed twice.
void pc_polytope_free(struct PcPolytope *p);

// # Safety
// `p` must be a live handle; `out` must be writable.
enum PcStatus pc_polytope_vertex_count(const struct PcPolytope *p, size_t *out);

// Runs the full decision and writes the JSON report to `*out_json`.
// `jobs == 0` uses the available parallelism.
//
// A negative verdict is still `PC_STATUS_OK`; inspect `verdict.kind`.
//
// # Safety
// `p` and `q` must be live handles; `out_json` must be writable.
enum PcStatus pc_decide(const struct PcPolytope *p,
                        const struct PcPolytope *q,
                        enum PcMode mode,
                        size_t samples_per_cell,
                        uint64_t seed,
                        size_t jobs,
                        char **out_json);

// Projection (or section) along `xi`, given as `"p,q,r"`, as PlanarBody JSON.
//
// # Safety
// `p` must be a live handle, `xi` a nul-terminated string and `out_json`
// writable.
enum PcStatus pc_planar_body(const struct PcPolytope *p,
                             const char *xi,
                             enum PcMode mode,
                             char **out_json);

// # Safety
// `s` must come from this library and not be freed twice.
void pc_string_free(char *s);

// Message of the last failed call on this thread, or null. Valid until the
// next call on the same thread.
const char *pc_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PROJCONG_H */
