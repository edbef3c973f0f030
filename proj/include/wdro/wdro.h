/* Copyright 2026 the wdro authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the wdro library: worst-case loss bounds over Wasserstein
 * ambiguity sets, constructive worst-case distributions, exact discrete
 * transport oracles, CVaR-style risk measures, and the regularized solver.
 *
 * All objects are opaque handles created from JSON descriptions and freed
 * with their matching _free function. Functions return WDRO_OK on success;
 * on failure wdro_last_error() describes the problem for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * wdro_string_free().
 */

#ifndef WDRO_H
#define WDRO_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct wdro_loss wdro_loss;
typedef struct wdro_dist wdro_dist;

typedef enum wdro_status {
  WDRO_OK = 0,
  WDRO_ERR_INVALID_ARGUMENT = 1,
  WDRO_ERR_PARSE = 2,
  WDRO_ERR_DOMAIN = 3,
  WDRO_ERR_DIMENSION = 4,
  WDRO_ERR_UNSUPPORTED = 5,
  WDRO_ERR_WITNESS = 6,
  WDRO_ERR_INFEASIBLE = 7,
  WDRO_ERR_IO = 8,
  WDRO_ERR_INTERNAL = 9
} wdro_status;

const char* wdro_version(void);
const char* wdro_last_error(void);
void wdro_string_free(char* s);

/* Loss + cost + exponent bundle, e.g.
 * {"family":"abs_linear","beta":[1,0],"r":1,
 *  "cost":{"variant":"full_norm","norm":{"kind":"l2"}}} */
wdro_status wdro_loss_parse(const char* json, wdro_loss** out);
void wdro_loss_free(wdro_loss* loss);

/* {"variant":"labeled","atoms":[{"x":[...],"y":...},...],"weights":[...]} */
wdro_status wdro_dist_parse(const char* json, wdro_dist** out);
wdro_status wdro_dist_to_json(const wdro_dist* dist, char** json_out);
void wdro_dist_free(wdro_dist* dist);

typedef struct wdro_bounds_report {
  double empirical_loss;
  double upper_u;
  double lower_l; /* filled by wdro_oracle_eval, NaN from wdro_bounds */
  double per_point_lower;
  double per_point_upper;
  int has_per_point;
  double delta;
  double r;
} wdro_bounds_report;

wdro_status wdro_bounds(const wdro_loss* loss, const wdro_dist* dist, double delta,
                        wdro_bounds_report* out);

typedef struct wdro_oracle_report {
  double value;       /* budgeted-LP supremum on the generated grid */
  double dual_value;  /* one-dimensional dual bound on the same grid */
  double lower_value; /* per-atom lower bound on the same grid */
  double rho_star;
  int tight;
  int grid_size;
} wdro_oracle_report;

wdro_status wdro_oracle_eval(const wdro_loss* loss, const wdro_dist* dist, double delta,
                             int resolution, wdro_oracle_report* out);

/* Constructive near-worst-case distribution; pass epsilon <= 0 for the
 * default min{L, delta L} / 1000. The certificate (distribution, achieved
 * value, verified radius, regime) is returned as JSON. */
wdro_status wdro_worst_case(const wdro_loss* loss, const wdro_dist* dist, double delta,
                            double epsilon, char** certificate_json_out);

/* Exact discrete transport discrepancy under the loss's cost and exponent. */
wdro_status wdro_wasserstein(const wdro_loss* loss, const wdro_dist* p, const wdro_dist* q,
                             double* out);

wdro_status wdro_cvar(const wdro_loss* g, const wdro_dist* dist, double alpha, double* out);
wdro_status wdro_robust_cvar(const wdro_loss* g, const wdro_dist* dist, double alpha, double delta,
                             double* out);
wdro_status wdro_hmcr(const wdro_loss* g, const wdro_dist* dist, double alpha, double r,
                      double delta, double* nominal_out, double* robust_out);

/* Subgradient solve of the regularized objective; beta0 of length dim (may be
 * NULL for zeros). Result {"beta":[...],"objective":...,"iterations":...}. */
wdro_status wdro_solve(const wdro_loss* loss, const wdro_dist* dist, double delta,
                       const double* beta0, int dim, double eta0, int max_iters,
                       char** result_json_out);

/* Batch runner; returns the process exit code contract of the CLI:
 * 0 ok, 1 config parse, 2 per-config failures recorded in rows, 3 io. */
int wdro_run(const char* config_path, const char* out_dir, int threads, int trace);

char* wdro_catalog(void);

#ifdef __cplusplus
}
#endif

#endif /* WDRO_H */
