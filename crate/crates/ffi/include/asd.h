#ifndef ASD_H
#define ASD_H

/* Generated by cbindgen from asd-ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum AsdStatus {
  ASD_STATUS_OK = 0,
  ASD_STATUS_NULL_POINTER = 1,
  ASD_STATUS_INVALID_ARGUMENT = 2,
  ASD_STATUS_INVALID_PLAN = 3,
  ASD_STATUS_IO = 4,
  ASD_STATUS_OUT_OF_RANGE = 5,
  ASD_STATUS_PANIC = 99,
} AsdStatus;

// Opaque deployment handle.
typedef struct AsdDeployment AsdDeployment;

// Sector coordinates of one point (0-based).
typedef struct AsdTag {
  uint32_t layer;
  uint32_t sector;
} AsdTag;

// Geometry and extent of one contiguous block of generated points.
typedef struct AsdSectorInfo {
  uint32_t layer;
  uint32_t sector;
  double inner_radius;
  double outer_radius;
  double angle_lo;
  double angle_hi;
  double area;
  // Index of the block's first point.
  size_t start;
  size_t count;
} AsdSectorInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure of a status-returning call on
// this thread, or null if that call succeeded. The string stays valid until
// the next status-returning call on the same thread.
const char *asd_last_error(void);

// Library version as a static NUL-terminated string.
const char *asd_version(void);

// Area of the ring sector `l1 <= r <= l2`, `a1 <= theta <= a2`.
//
// # Safety
// `out` must be null or point to writable memory for one `double`.
enum AsdStatus asd_sector_area(double l1, double l2, double a1, double a2, double *out);

// Places `n` points uniformly in one ring sector.
//
// # Safety
// `out` must be null or point to writable memory for one pointer.
enum AsdStatus asd_sample_ring(double l1,
                               double l2,
                               double a1,
                               double a2,
                               uint64_t n,
                               uint64_t seed,
                               struct AsdDeployment **out);

// Deploys the plan given as a JSON document.
//
// # Safety
// `plan_json` must be null or a NUL-terminated string. `out` must be null or
// point to writable memory for one pointer.
enum AsdStatus asd_deploy_controlled_json(const char *plan_json,
                                          uint64_t seed,
                                          struct AsdDeployment **out);

// Uncontrolled deployment with a random number of layers. When
// `layer_count` is non-null it receives the number of layers drawn.
//
// # Safety
// `out` must be null or point to writable memory for one pointer;
// `layer_count` must be null or writable.
enum AsdStatus asd_deploy_auto(double cell_radius,
                               uint32_t max_layers,
                               uint64_t total_nodes,
                               uint64_t seed,
                               struct AsdDeployment **out,
                               uint32_t *layer_count);

// Releases a handle. Null is ignored.
//
// # Safety
// `dep` must be null or a handle from this library not yet freed.
void asd_deployment_free(struct AsdDeployment *dep);

// Number of points, or 0 for a null handle.
//
// # Safety
// `dep` must be null or a live handle.
size_t asd_deployment_len(const struct AsdDeployment *dep);

// Seed the deployment was generated with, or 0 for a null handle.
//
// # Safety
// `dep` must be null or a live handle.
uint64_t asd_deployment_seed(const struct AsdDeployment *dep);

// Interleaved `x0, y0, x1, y1, ...` coordinates, `2 * len` doubles long and
// owned by the handle. Null for a null or empty handle.
//
// # Safety
// `dep` must be null or a live handle.
const double *asd_deployment_coords(const struct AsdDeployment *dep);

// Copies up to `cap` point tags into `buf` and stores the number copied in
// `*written`.
//
// # Safety
// `dep` must be null or a live handle; `buf` must hold `cap` tags;
// `written` must be null or writable.
enum AsdStatus asd_deployment_copy_tags(const struct AsdDeployment *dep,
                                        struct AsdTag *buf,
                                        size_t cap,
                                        size_t *written);

// Number of sector blocks, or 0 for a null handle.
//
// # Safety
// `dep` must be null or a live handle.
size_t asd_deployment_sector_count(const struct AsdDeployment *dep);

// Describes sector block `index`, in generation order.
//
// # Safety
// `dep` must be null or a live handle; `out` must be null or writable.
enum AsdStatus asd_deployment_sector(const struct AsdDeployment *dep,
                                     size_t index,
                                     struct AsdSectorInfo *out);

// Writes the points as CSV (`x,y,layer,sector`).
//
// # Safety
// `dep` must be null or a live handle; `path` must be null or a
// NUL-terminated string.
enum AsdStatus asd_deployment_write_csv(const struct AsdDeployment *dep, const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ASD_H */
