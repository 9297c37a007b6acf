/*
 * C API for the Hawkes cumulant toolkit.
 *
 * Every function returns a hawkes_status; HAWKES_OK means success and any
 * other value names the failure class (hawkes_last_error() carries the
 * message for the calling thread). Objects are opaque handles created by
 * *_create / *_parse functions and released with the matching *_free.
 * Handles are immutable after creation and safe to share across threads;
 * out-parameters are written only on success.
 */
#ifndef HAWKES_H
#define HAWKES_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hawkes_status {
  HAWKES_OK = 0,
  HAWKES_ERR_INVALID_ARGUMENT = 1,
  HAWKES_ERR_DEGENERATE = 2,
  HAWKES_ERR_STABILITY = 3,
  HAWKES_ERR_CONVERGENCE = 4,
  HAWKES_ERR_SIZE = 5,
  HAWKES_ERR_MALFORMED_TREE = 6,
  HAWKES_ERR_GRID = 7,
  HAWKES_ERR_WINDOW = 8,
  HAWKES_ERR_LINEAGE = 9,
  HAWKES_ERR_BOUND = 10,
  HAWKES_ERR_EXPLOSION = 11,
  HAWKES_ERR_PARSE = 12,
  HAWKES_ERR_IO = 13,
  HAWKES_ERR_INTERNAL = 14
} hawkes_status;

const char* hawkes_status_name(hawkes_status status);

/* message of the most recent failure on this thread */
const char* hawkes_last_error(void);

typedef struct hawkes_model hawkes_model;
typedef struct hawkes_summary hawkes_summary;
typedef struct hawkes_renewal hawkes_renewal;
typedef struct hawkes_density hawkes_density;
typedef struct hawkes_stream hawkes_stream;

/* ---- model ---- */

hawkes_status hawkes_model_parse_json(const char* text, hawkes_model** out);
hawkes_status hawkes_model_load(const char* path, hawkes_model** out);
hawkes_status hawkes_model_to_json(const hawkes_model* model, char** out_json);
void hawkes_model_free(hawkes_model* model);
int hawkes_model_dim(const hawkes_model* model);

/* grid defaults derived from the kernel scales */
double hawkes_model_default_dt(const hawkes_model* model);
double hawkes_model_default_horizon(const hawkes_model* model);
double hawkes_model_correlation_horizon(const hawkes_model* model);

/* ---- branching summary ---- */

hawkes_status hawkes_summary_build(const hawkes_model* model, double tol, hawkes_summary** out);
void hawkes_summary_free(hawkes_summary* summary);
int hawkes_summary_dim(const hawkes_summary* summary);
double hawkes_summary_rho(const hawkes_summary* summary);
/* buffers hold dim (lambda) or dim*dim (matrices, row-major) doubles */
hawkes_status hawkes_summary_lambda(const hawkes_summary* summary, double* out);
hawkes_status hawkes_summary_gbar(const hawkes_summary* summary, double* out);
hawkes_status hawkes_summary_resolvent(const hawkes_summary* summary, double* out);
hawkes_status hawkes_summary_psi(const hawkes_summary* summary, double* out);

/* power iteration with a strongly-connected-component fallback; matrix is
 * d x d row-major, entrywise non-negative */
hawkes_status hawkes_spectral_radius(const double* matrix, int dim, double tol, double* out);

/* ---- renewal density ---- */

hawkes_status hawkes_renewal_solve(const hawkes_model* model, double dt, double horizon,
                                   double tol, hawkes_renewal** out);
void hawkes_renewal_free(hawkes_renewal* renewal);
int hawkes_renewal_len(const hawkes_renewal* renewal);
double hawkes_renewal_dt(const hawkes_renewal* renewal);
double hawkes_renewal_horizon(const hawkes_renewal* renewal);
/* continuous part of R^{ij} at the grid nodes (len doubles); the identity
 * atom at t = 0 stays symbolic */
hawkes_status hawkes_renewal_values(const hawkes_renewal* renewal, int i, int j, double* out,
                                    int capacity);
/* trapezoid integral of the continuous part plus the identity atom */
hawkes_status hawkes_renewal_integral(const hawkes_renewal* renewal, double* out_matrix);

/* ---- trees ---- */

/* exact count as a decimal string (grows past 64 bits near n = 18) */
hawkes_status hawkes_tree_count(int n, char* buffer, size_t capacity);
typedef int (*hawkes_tree_visit_fn)(const char* encoding, void* user); /* nonzero stops */
hawkes_status hawkes_tree_enumerate(int n, hawkes_tree_visit_fn visit, void* user);

/* ---- integrated cumulants ---- */

hawkes_status hawkes_integrated_cumulant(const hawkes_summary* summary, const int* types, int n,
                                         double* out);
/* per-tree contributions; *count is set to the tree count for this order */
hawkes_status hawkes_integrated_cumulant_terms(const hawkes_summary* summary, const int* types,
                                               int n, double* out_terms, int capacity,
                                               int* count);
hawkes_status hawkes_integrated_covariance(const hawkes_summary* summary, double* out_matrix);
hawkes_status hawkes_integrated_third(const hawkes_summary* summary, double* out_tensor);
/* partial sums of the motif expansion, indexed by total power 0..max_power */
hawkes_status hawkes_motif_series(const hawkes_summary* summary, const int* types, int n,
                                  int max_power, double* out_partial_sums);

/* ---- cumulant densities ---- */

/* max_order: 3 by default, 4 opt-in */
hawkes_status hawkes_density_create(const hawkes_summary* summary, const hawkes_renewal* renewal,
                                    const int* types, int n, int max_order, hawkes_density** out);
void hawkes_density_free(hawkes_density* density);
/* continuous part plus the total coefficient of the delta atoms active at
 * exactly-coincident query times */
hawkes_status hawkes_density_eval(const hawkes_density* density, const double* times,
                                  double* out_continuous, double* out_atomic);

/* ---- simulation ---- */

/* burn_in < 0 selects the model-derived default; cap <= 0 keeps the default
 * per-cluster event cap; threads <= 0 uses the hardware count (both capped
 * by the HAWKES_THREADS environment variable) */
hawkes_status hawkes_simulate_clusters(const hawkes_model* model, double t_obs, double burn_in,
                                       uint64_t seed, long long cluster_event_cap, int threads,
                                       hawkes_stream** out);
hawkes_status hawkes_simulate_thinning(const hawkes_model* model, double t_obs, double burn_in,
                                       uint64_t seed, hawkes_stream** out);
void hawkes_stream_free(hawkes_stream* stream);
long long hawkes_stream_size(const hawkes_stream* stream);
int hawkes_stream_dim(const hawkes_stream* stream);
int hawkes_stream_has_lineage(const hawkes_stream* stream);
double hawkes_stream_t_obs(const hawkes_stream* stream);
double hawkes_stream_burn_in(const hawkes_stream* stream);
/* column extraction; any output pointer may be NULL */
hawkes_status hawkes_stream_columns(const hawkes_stream* stream, double* times, int* types,
                                    long long* cluster_ids, long long* parent_rows,
                                    int* generations);
hawkes_status hawkes_stream_write_csv(const hawkes_stream* stream, const char* path);
hawkes_status hawkes_stream_read_csv(const char* path, hawkes_stream** out);

/* ---- estimation ---- */

typedef struct hawkes_estimate {
  double value;
  double std_error;
  long long n_samples;
} hawkes_estimate;

/* n aligned series of length len, row-major in `data` */
hawkes_status hawkes_joint_cumulant(const double* data, int n, long long len,
                                    hawkes_estimate* out);
hawkes_status hawkes_empirical_integrated_cumulant(const hawkes_stream* stream, const int* types,
                                                   int n, double bin_width, double margin,
                                                   hawkes_estimate* out);
/* lag grids: bins intervals of width lag_step starting at lag_lo */
hawkes_status hawkes_covariance_density(const hawkes_stream* stream, int type_i, int type_j,
                                        double lag_lo, double lag_step, int bins, double margin,
                                        hawkes_estimate* out);
hawkes_status hawkes_same_cluster_density2(const hawkes_stream* stream, int type_i, int type_j,
                                           double lag_lo, double lag_step, int bins,
                                           double margin, hawkes_estimate* out);
/* row-major [bins2 x bins3] over the 2-d lag grid (t2 - t1, t3 - t1) */
hawkes_status hawkes_same_cluster_density3(const hawkes_stream* stream, const int* types3,
                                           double lag2_lo, double lag2_step, int bins2,
                                           double lag3_lo, double lag3_step, int bins3,
                                           double margin, hawkes_estimate* out);

/* ---- verification ---- */

/* runs the simulate -> estimate -> compare pipeline; *out_report_json gets
 * a heap string (release with hawkes_string_free), *all_pass is 1 when
 * every check lands within three standard errors */
hawkes_status hawkes_verify_run(const hawkes_model* model, double t_obs, uint64_t seed,
                                double bin_width, char** out_report_json, int* all_pass);

void hawkes_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* HAWKES_H */
