#ifndef ZK_ZK_H
#define ZK_ZK_H

#include <stddef.h>
#include <stdint.h>

#if defined(ZK_BUILDING_LIBRARY)
#define ZK_API __attribute__((visibility("default")))
#else
#define ZK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zk_status {
  ZK_OK = 0,
  ZK_ERR_INVALID_ARGUMENT = 1,
  ZK_ERR_NOT_CONVERGED = 2,
  ZK_ERR_NUMERIC = 3,
  ZK_ERR_IO = 4,
  ZK_ERR_DOMAIN = 5,
  ZK_ERR_INTERNAL = 6
} zk_status;

typedef struct zk_field zk_field;
typedef struct zk_ground_state zk_ground_state;
typedef struct zk_run zk_run;

/* Message of the last failed call on this thread ("" when none). */
ZK_API const char* zk_last_error(void);
ZK_API const char* zk_version(void);
ZK_API const char* zk_status_name(zk_status s);

/* Strings returned through char** are owned by the caller. */
ZK_API void zk_string_free(char* s);

/* Fields: n x n samples on [-box, box)^2, row-major with y outermost. */
ZK_API zk_status zk_field_create(int n, double box, const double* samples, zk_field** out);
/* Descriptor kinds: gauss, cosine, qmul, file, random. qmul needs a ground
   state for the requested k on the same grid; g may be NULL otherwise. */
ZK_API zk_status zk_field_from_descriptor(const char* descriptor, int n, double box, int k,
                                          const zk_ground_state* g, zk_field** out);
ZK_API zk_status zk_field_load(const char* path, zk_field** out, int* k, double* time);
ZK_API zk_status zk_field_save(const zk_field* f, const char* path, int k, double time);
ZK_API zk_status zk_field_grid(const zk_field* f, int* n, double* box);
/* Borrowed pointer, valid until the field is freed. */
ZK_API zk_status zk_field_samples(const zk_field* f, const double** data, size_t* len);
ZK_API zk_status zk_field_scale(zk_field* f, double c);
/* {mass, energy, grad_sq, linf, boundary_fraction} */
ZK_API zk_status zk_field_summary(const zk_field* f, int k, char** json);
ZK_API void zk_field_free(zk_field* f);

/* Config keys: k, n, box, tol, max_iters, burn_in, dealiased. */
ZK_API zk_status zk_groundstate_solve(const char* config_json, zk_ground_state** out);
ZK_API zk_status zk_groundstate_from_field(int k, const zk_field* Q, int dealiased, zk_ground_state** out);
ZK_API zk_status zk_groundstate_field(const zk_ground_state* g, zk_field** out);
ZK_API int zk_groundstate_k(const zk_ground_state* g);
/* Sidecar with Pohozaev residuals, energy identity and a pass flag. */
ZK_API zk_status zk_groundstate_report(const zk_ground_state* g, char** json);
ZK_API void zk_groundstate_free(zk_ground_state* g);

/* Config keys: random_fields, amplitude, seed, psi_solve, tol. */
ZK_API zk_status zk_gn_constant(const zk_ground_state* g, const char* config_json, char** json);

ZK_API zk_status zk_threshold_report(const zk_field* u0, const zk_ground_state* g, char** json);
/* k >= 3 only. */
ZK_API zk_status zk_dichotomy_report(const zk_field* u0, const zk_ground_state* g, char** json);
/* Random-field audit of the dichotomy equivalence. Config keys: fields, seed,
   amp_min, amp_max. */
ZK_API zk_status zk_dichotomy_audit(const zk_ground_state* g, const char* config_json, char** json);

/* Config keys: k, dt, T, pad, dealias, snapshot_stride, boundary_tolerance,
   growth_factor, check_step_budget, keep_snapshots. The callback, when given,
   sees every snapshot; a nonzero return aborts the run with ZK_ERR_INTERNAL. */
typedef int (*zk_snapshot_fn)(double t, const zk_field* u, void* user);
ZK_API zk_status zk_evolve(const zk_field* u0, const char* config_json, zk_snapshot_fn cb, void* user,
                           zk_run** out);
ZK_API zk_status zk_run_ledger_csv(const zk_run* r, char** csv);
/* {status, t_reached, steps, dt_used, message, max_mass_drift, max_energy_drift} */
ZK_API zk_status zk_run_report(const zk_run* r, char** json);
ZK_API zk_status zk_run_final_state(const zk_run* r, zk_field** out);
ZK_API size_t zk_run_snapshot_count(const zk_run* r);
ZK_API zk_status zk_run_snapshot(const zk_run* r, size_t i, double* t, zk_field** out);
ZK_API void zk_run_free(zk_run* r);

/* Trap monitor over a ledger CSV, thresholds taken from u0 and g. *pass is
   set to 1 when every row keeps a positive margin. */
ZK_API zk_status zk_trap_audit(const char* ledger_csv, const zk_field* u0, const zk_ground_state* g,
                               char** json, int* pass);

/* Config keys: theta, eps, t_min, t_max, samples, box_doubling_check, validity_tol. */
ZK_API zk_status zk_decay_probe(const zk_field* f, const char* config_json, char** json);

/* estimate: "smoothing", "maximal" or "strichartz". Config keys: n, box, width,
   modes, T, time_samples, box_doubling_check, validity_tol, s_values, theta,
   eps, random_fields. */
ZK_API zk_status zk_dispersive_probe(const char* estimate, const char* config_json, uint64_t seed, char** json,
                                     int* pass);

/* Config keys: k, delta, checkpoints, horizons, fit_t_min, fit_t_max,
   window_boundary_tol, tail_ratio_max, decay_ratio_max, slope_margin, dt, pad,
   sample_interval, normalize. f_plus may be NULL. */
ZK_API zk_status zk_scatter(const zk_field* u0, const char* config_json, char** json, zk_field** f_plus,
                            int* pass);

ZK_API zk_status zk_indices(int k, char** json);

#ifdef __cplusplus
}
#endif

#endif
