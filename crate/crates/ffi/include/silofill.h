#ifndef SILOFILL_H
#define SILOFILL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfSlopeRule {
  SF_SLOPE_RULE_GODUNOV = 0,
  SF_SLOPE_RULE_MAX_ABS = 1,
} SfSlopeRule;

typedef enum SfFluxRule {
  SF_FLUX_RULE_INTERFACE = 0,
  SF_FLUX_RULE_NODAL = 1,
} SfFluxRule;

typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_PARAMETER = 2,
  SF_STATUS_INVALID_GRID = 3,
  SF_STATUS_INVALID_SOURCE = 4,
  SF_STATUS_ZERO_MASS = 5,
  SF_STATUS_NOT_CONVERGED = 6,
  SF_STATUS_NUMERICAL = 7,
  SF_STATUS_CONFIG = 8,
  SF_STATUS_IO = 9,
  SF_STATUS_PANIC = 10,
} SfStatus;

typedef enum SfMode {
  SF_MODE_SIMILARITY = 0,
  SF_MODE_EVOLVE = 1,
  SF_MODE_COMPARE = 2,
} SfMode;

/*
 Opaque result handle: nodal `u`, `v`, the growth velocity and, for
 evolutions, run diagnostics.
 */
typedef struct SfProfile SfProfile;

/*
 Opaque source handle.
 */
typedef struct SfSource SfSource;

typedef struct SfParameters {
  double alpha;
  double beta;
  double gamma;
} SfParameters;

typedef struct SfScheme {
  double cfl_safety;
  double exchange_cap_safety;
  double stop_epsilon;
  size_t stop_window;
  double steady_epsilon;
  size_t max_steps;
  enum SfSlopeRule slope;
  enum SfFluxRule flux;
} SfScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread; empty after a success.
 Valid until the next call into the library on this thread.
 */
const char *sf_last_error_message(void);

struct SfParameters sf_parameters_unit(void);

struct SfScheme sf_scheme_default(void);

/*
 New empty source; release with [`sf_source_free`].
 */
struct SfSource *sf_source_new(void);

/*
 # Safety
 `src` must come from [`sf_source_new`] and not be used afterwards.
 */
void sf_source_free(struct SfSource *src);

/*
 # Safety
 `src` must be a live source handle.
 */
enum SfStatus sf_source_add_interval(struct SfSource *src, double a, double b, double intensity);

/*
 # Safety
 `src` must be a live source handle.
 */
enum SfStatus sf_source_add_rect(struct SfSource *src,
                                 double x0,
                                 double x1,
                                 double y0,
                                 double y1,
                                 double intensity);

/*
 # Safety
 `src` must be a live source handle.
 */
enum SfStatus sf_source_add_disk(struct SfSource *src,
                                 double cx,
                                 double cy,
                                 double r,
                                 double intensity);

/*
 # Safety
 `src` must be a live source handle.
 */
enum SfStatus sf_source_add_atom_1d(struct SfSource *src, double x, double mass);

/*
 # Safety
 `src` must be a live source handle.
 */
enum SfStatus sf_source_add_atom_2d(struct SfSource *src, double x, double y, double mass);

/*
 Mean of the source over `[0, length]` (`ly <= 0`) or `[0, lx] x [0, ly]`.

 # Safety
 `src` must be a live source handle and `out` writable.
 */
enum SfStatus sf_source_mean(const struct SfSource *src, double lx, double ly, double *out);

/*
 Exact 1D similarity profile at `nodes` equispaced nodes of `[0, length]`.

 # Safety
 Pointers must be valid; `*out` receives a handle for [`sf_profile_free`].
 */
enum SfStatus sf_exact_1d(const struct SfSource *src,
                          double length,
                          size_t nodes,
                          const struct SfParameters *params,
                          struct SfProfile **out);

/*
 Discrete (finite-element) 1D similarity profile.

 # Safety
 As [`sf_exact_1d`].
 */
enum SfStatus sf_similarity_1d(const struct SfSource *src,
                               double length,
                               size_t nodes,
                               const struct SfParameters *params,
                               struct SfProfile **out);

/*
 Discrete similarity profile on an `nx` x `ny` node lattice, `x` fastest.

 # Safety
 As [`sf_exact_1d`].
 */
enum SfStatus sf_similarity_2d(const struct SfSource *src,
                               double lx,
                               double ly,
                               size_t nx,
                               size_t ny,
                               const struct SfParameters *params,
                               struct SfProfile **out);

/*
 Evolve from rest until a similarity profile is detected. A run that
 stops at `max_steps` still yields a profile; check
 [`sf_profile_converged`]. `scheme` may be null for defaults.

 # Safety
 As [`sf_exact_1d`]; `scheme` is null or valid.
 */
enum SfStatus sf_evolve_1d(const struct SfSource *src,
                           double length,
                           size_t nodes,
                           const struct SfParameters *params,
                           const struct SfScheme *scheme,
                           struct SfProfile **out);

/*
 # Safety
 As [`sf_evolve_1d`].
 */
enum SfStatus sf_evolve_2d(const struct SfSource *src,
                           double lx,
                           double ly,
                           size_t nx,
                           size_t ny,
                           const struct SfParameters *params,
                           const struct SfScheme *scheme,
                           struct SfProfile **out);

/*
 # Safety
 `p` must come from one of the solver calls and not be used afterwards.
 */
void sf_profile_free(struct SfProfile *p);

/*
 Number of nodes; 0 for a null handle.

 # Safety
 `p` is null or a live profile.
 */
size_t sf_profile_len(const struct SfProfile *p);

/*
 Standing layer, minimum 0. Borrowed; valid while the handle lives.

 # Safety
 `p` is null or a live profile.
 */
const double *sf_profile_u(const struct SfProfile *p);

/*
 Rolling layer. Borrowed; valid while the handle lives.

 # Safety
 `p` is null or a live profile.
 */
const double *sf_profile_v(const struct SfProfile *p);

/*
 Growth velocity; NaN for a null handle.

 # Safety
 `p` is null or a live profile.
 */
double sf_profile_c(const struct SfProfile *p);

/*
 Time steps taken (0 for similarity profiles).

 # Safety
 `p` is null or a live profile.
 */
size_t sf_profile_steps(const struct SfProfile *p);

/*
 # Safety
 `p` is null or a live profile.
 */
bool sf_profile_converged(const struct SfProfile *p);

/*
 True if the evolution tripped the clipping or mass-balance alarm.

 # Safety
 `p` is null or a live profile.
 */
bool sf_profile_alarm(const struct SfProfile *p);

/*
 Run an experiment config file; `out_dir` (nullable) overrides its output
 directory. `*success` is set as the CLI's exit status would be.

 # Safety
 `config_path` is a NUL-terminated path, `out_dir` null or one, `success` writable.
 */
enum SfStatus sf_run_config(const char *config_path,
                            const char *out_dir,
                            enum SfMode mode,
                            bool *success);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SILOFILL_H */
