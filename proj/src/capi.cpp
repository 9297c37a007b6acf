#include "hawkes/hawkes.h"

#include <cstring>
#include <memory>
#include <string>

#include "cumulants.hpp"
#include "density.hpp"
#include "errors.hpp"
#include "estimate.hpp"
#include "model.hpp"
#include "model_io.hpp"
#include "simulate.hpp"
#include "trees.hpp"
#include "verify.hpp"

struct hawkes_model {
  hawkes::HawkesModel impl;
};
struct hawkes_summary {
  hawkes::BranchingSummary impl;
};
struct hawkes_renewal {
  hawkes::RenewalDensity impl;
};
struct hawkes_density {
  // self-contained: owns copies so the handle has no external lifetimes
  hawkes::BranchingSummary summary;
  hawkes::RenewalDensity renewal;
  std::unique_ptr<hawkes::DensityEvaluator> impl;
};
struct hawkes_stream {
  hawkes::EventStream impl;
};

namespace {

thread_local std::string g_last_error;

hawkes_status map_code(hawkes::ErrorCode code) {
  const int v = static_cast<int>(code);
  if (v >= 1 && v <= 13) return static_cast<hawkes_status>(v);
  return HAWKES_ERR_INTERNAL;
}

template <typename Fn>
hawkes_status guarded(Fn&& fn) {
  try {
    fn();
    return HAWKES_OK;
  } catch (const hawkes::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HAWKES_ERR_INTERNAL;
  }
}

hawkes_status need(bool cond, const char* msg) {
  if (cond) return HAWKES_OK;
  g_last_error = msg;
  return HAWKES_ERR_INVALID_ARGUMENT;
}

std::vector<int> type_vector(const int* types, int n) {
  hawkes::require(types != nullptr && n >= 1, hawkes::ErrorCode::invalid_argument,
                  "null or empty type multi-index");
  return std::vector<int>(types, types + n);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* hawkes_status_name(hawkes_status status) {
  switch (status) {
    case HAWKES_OK: return "ok";
    case HAWKES_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case HAWKES_ERR_DEGENERATE: return "degenerate";
    case HAWKES_ERR_STABILITY: return "stability";
    case HAWKES_ERR_CONVERGENCE: return "convergence";
    case HAWKES_ERR_SIZE: return "size";
    case HAWKES_ERR_MALFORMED_TREE: return "malformed_tree";
    case HAWKES_ERR_GRID: return "grid";
    case HAWKES_ERR_WINDOW: return "window";
    case HAWKES_ERR_LINEAGE: return "lineage";
    case HAWKES_ERR_BOUND: return "bound";
    case HAWKES_ERR_EXPLOSION: return "explosion";
    case HAWKES_ERR_PARSE: return "parse";
    case HAWKES_ERR_IO: return "io";
    case HAWKES_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* hawkes_last_error(void) { return g_last_error.c_str(); }

/* ---- model ---- */

hawkes_status hawkes_model_parse_json(const char* text, hawkes_model** out) {
  if (auto s = need(text && out, "null argument")) return s;
  return guarded([&] { *out = new hawkes_model{hawkes::model_from_json(text)}; });
}

hawkes_status hawkes_model_load(const char* path, hawkes_model** out) {
  if (auto s = need(path && out, "null argument")) return s;
  return guarded([&] { *out = new hawkes_model{hawkes::load_model(path)}; });
}

hawkes_status hawkes_model_to_json(const hawkes_model* model, char** out_json) {
  if (auto s = need(model && out_json, "null argument")) return s;
  return guarded([&] { *out_json = dup_string(hawkes::model_to_json(model->impl)); });
}

void hawkes_model_free(hawkes_model* model) { delete model; }

int hawkes_model_dim(const hawkes_model* model) { return model ? model->impl.dim() : 0; }

double hawkes_model_default_dt(const hawkes_model* model) {
  return model ? hawkes::default_renewal_dt(model->impl) : 0.0;
}

double hawkes_model_default_horizon(const hawkes_model* model) {
  return model ? hawkes::default_renewal_horizon(model->impl) : 0.0;
}

double hawkes_model_correlation_horizon(const hawkes_model* model) {
  return model ? model->impl.correlation_horizon() : 0.0;
}

/* ---- summary ---- */

hawkes_status hawkes_summary_build(const hawkes_model* model, double tol, hawkes_summary** out) {
  if (auto s = need(model && out, "null argument")) return s;
  return guarded([&] {
    *out = new hawkes_summary{hawkes::build_summary(model->impl, tol > 0.0 ? tol : 1e-12)};
  });
}

void hawkes_summary_free(hawkes_summary* summary) { delete summary; }

int hawkes_summary_dim(const hawkes_summary* summary) { return summary ? summary->impl.dim : 0; }

double hawkes_summary_rho(const hawkes_summary* summary) {
  return summary ? summary->impl.rho : 0.0;
}

namespace {

hawkes_status copy_matrix(const hawkes_summary* summary, double* out, const hawkes::Mat& m) {
  if (auto s = need(summary && out, "null argument")) return s;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
  return HAWKES_OK;
}

}  // namespace

hawkes_status hawkes_summary_lambda(const hawkes_summary* summary, double* out) {
  if (auto s = need(summary && out, "null argument")) return s;
  for (int i = 0; i < summary->impl.dim; ++i) out[i] = summary->impl.lambda[i];
  return HAWKES_OK;
}

hawkes_status hawkes_summary_gbar(const hawkes_summary* summary, double* out) {
  return copy_matrix(summary, out, summary ? summary->impl.gbar : hawkes::Mat());
}

hawkes_status hawkes_summary_resolvent(const hawkes_summary* summary, double* out) {
  return copy_matrix(summary, out, summary ? summary->impl.resolvent : hawkes::Mat());
}

hawkes_status hawkes_summary_psi(const hawkes_summary* summary, double* out) {
  return copy_matrix(summary, out, summary ? summary->impl.psi : hawkes::Mat());
}

hawkes_status hawkes_spectral_radius(const double* matrix, int dim, double tol, double* out) {
  if (auto s = need(matrix && out && dim >= 1, "need a square matrix and output")) return s;
  return guarded([&] {
    hawkes::Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = matrix[i * dim + j];
    *out = hawkes::spectral_radius(m, tol > 0.0 ? tol : 1e-12);
  });
}

/* ---- renewal ---- */

hawkes_status hawkes_renewal_solve(const hawkes_model* model, double dt, double horizon,
                                   double tol, hawkes_renewal** out) {
  if (auto s = need(model && out, "null argument")) return s;
  return guarded([&] {
    *out = new hawkes_renewal{
        hawkes::renewal_density(model->impl, dt, horizon, tol > 0.0 ? tol : 1e-8)};
  });
}

void hawkes_renewal_free(hawkes_renewal* renewal) { delete renewal; }

int hawkes_renewal_len(const hawkes_renewal* renewal) { return renewal ? renewal->impl.len : 0; }

double hawkes_renewal_dt(const hawkes_renewal* renewal) { return renewal ? renewal->impl.dt : 0.0; }

double hawkes_renewal_horizon(const hawkes_renewal* renewal) {
  return renewal ? renewal->impl.horizon : 0.0;
}

hawkes_status hawkes_renewal_values(const hawkes_renewal* renewal, int i, int j, double* out,
                                    int capacity) {
  if (auto s = need(renewal && out, "null argument")) return s;
  const auto& impl = renewal->impl;
  if (auto s = need(i >= 1 && i <= impl.dim && j >= 1 && j <= impl.dim, "index out of range"))
    return s;
  if (auto s = need(capacity >= impl.len, "buffer too small")) return s;
  const auto& row = impl.entry(i - 1, j - 1);
  for (int k = 0; k < impl.len; ++k) out[k] = row[k];
  return HAWKES_OK;
}

hawkes_status hawkes_renewal_integral(const hawkes_renewal* renewal, double* out_matrix) {
  if (auto s = need(renewal && out_matrix, "null argument")) return s;
  return guarded([&] {
    const hawkes::Mat m = renewal->impl.integral_with_atom();
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) out_matrix[i * m.cols() + j] = m(i, j);
  });
}

/* ---- trees ---- */

hawkes_status hawkes_tree_count(int n, char* buffer, size_t capacity) {
  if (auto s = need(buffer && capacity > 0, "null buffer")) return s;
  return guarded([&] {
    const std::string text = hawkes::count_trees(n).get_str();
    hawkes::require(text.size() + 1 <= capacity, hawkes::ErrorCode::invalid_argument,
                    "buffer too small for the count");
    std::memcpy(buffer, text.c_str(), text.size() + 1);
  });
}

hawkes_status hawkes_tree_enumerate(int n, hawkes_tree_visit_fn visit, void* user) {
  if (auto s = need(visit != nullptr, "null visitor")) return s;
  return guarded([&] {
    bool stopped = false;
    hawkes::for_each_tree(n, [&](const hawkes::LeafLabeledTree& tree) {
      if (stopped) return;
      if (visit(tree.encode().c_str(), user) != 0) stopped = true;
    });
  });
}

/* ---- integrated cumulants ---- */

hawkes_status hawkes_integrated_cumulant(const hawkes_summary* summary, const int* types, int n,
                                         double* out) {
  if (auto s = need(summary && out, "null argument")) return s;
  return guarded([&] { *out = hawkes::integrated_cumulant(summary->impl, type_vector(types, n)); });
}

hawkes_status hawkes_integrated_cumulant_terms(const hawkes_summary* summary, const int* types,
                                               int n, double* out_terms, int capacity,
                                               int* count) {
  if (auto s = need(summary && out_terms && count, "null argument")) return s;
  return guarded([&] {
    const auto terms = hawkes::integrated_cumulant_terms(summary->impl, type_vector(types, n));
    hawkes::require(static_cast<int>(terms.size()) <= capacity,
                    hawkes::ErrorCode::invalid_argument, "terms buffer too small");
    for (size_t t = 0; t < terms.size(); ++t) out_terms[t] = terms[t];
    *count = static_cast<int>(terms.size());
  });
}

hawkes_status hawkes_integrated_covariance(const hawkes_summary* summary, double* out_matrix) {
  if (auto s = need(summary && out_matrix, "null argument")) return s;
  return guarded([&] {
    const hawkes::Mat m = hawkes::integrated_covariance(summary->impl);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) out_matrix[i * m.cols() + j] = m(i, j);
  });
}

hawkes_status hawkes_integrated_third(const hawkes_summary* summary, double* out_tensor) {
  if (auto s = need(summary && out_tensor, "null argument")) return s;
  return guarded([&] {
    const auto t = hawkes::integrated_third(summary->impl);
    for (size_t q = 0; q < t.size(); ++q) out_tensor[q] = t[q];
  });
}

hawkes_status hawkes_motif_series(const hawkes_summary* summary, const int* types, int n,
                                  int max_power, double* out_partial_sums) {
  if (auto s = need(summary && out_partial_sums, "null argument")) return s;
  return guarded([&] {
    const auto sums = hawkes::motif_series(summary->impl, type_vector(types, n), max_power);
    for (size_t p = 0; p < sums.size(); ++p) out_partial_sums[p] = sums[p];
  });
}

/* ---- densities ---- */

hawkes_status hawkes_density_create(const hawkes_summary* summary, const hawkes_renewal* renewal,
                                    const int* types, int n, int max_order, hawkes_density** out) {
  if (auto s = need(summary && renewal && out, "null argument")) return s;
  return guarded([&] {
    auto handle = std::make_unique<hawkes_density>();
    handle->summary = summary->impl;
    handle->renewal = renewal->impl;
    hawkes::DensityOptions opts;
    if (max_order > 0) opts.max_order = max_order;
    handle->impl = std::make_unique<hawkes::DensityEvaluator>(handle->summary, handle->renewal,
                                                              type_vector(types, n), opts);
    *out = handle.release();
  });
}

void hawkes_density_free(hawkes_density* density) { delete density; }

hawkes_status hawkes_density_eval(const hawkes_density* density, const double* times,
                                  double* out_continuous, double* out_atomic) {
  if (auto s = need(density && times && out_continuous, "null argument")) return s;
  return guarded([&] {
    const auto value =
        density->impl->eval(std::vector<double>(times, times + density->impl->order()));
    *out_continuous = value.continuous;
    if (out_atomic) *out_atomic = value.atom_total();
  });
}

/* ---- simulation ---- */

hawkes_status hawkes_simulate_clusters(const hawkes_model* model, double t_obs, double burn_in,
                                       uint64_t seed, long long cluster_event_cap, int threads,
                                       hawkes_stream** out) {
  if (auto s = need(model && out, "null argument")) return s;
  return guarded([&] {
    hawkes::SimOptions opts;
    opts.burn_in = burn_in;
    if (cluster_event_cap > 0) opts.cluster_event_cap = cluster_event_cap;
    opts.threads = threads;
    *out = new hawkes_stream{hawkes::simulate_clusters(model->impl, t_obs, seed, opts)};
  });
}

hawkes_status hawkes_simulate_thinning(const hawkes_model* model, double t_obs, double burn_in,
                                       uint64_t seed, hawkes_stream** out) {
  if (auto s = need(model && out, "null argument")) return s;
  return guarded([&] {
    hawkes::SimOptions opts;
    opts.burn_in = burn_in;
    *out = new hawkes_stream{hawkes::simulate_thinning(model->impl, t_obs, seed, opts)};
  });
}

void hawkes_stream_free(hawkes_stream* stream) { delete stream; }

long long hawkes_stream_size(const hawkes_stream* stream) {
  return stream ? static_cast<long long>(stream->impl.events.size()) : 0;
}

int hawkes_stream_dim(const hawkes_stream* stream) { return stream ? stream->impl.dim : 0; }

int hawkes_stream_has_lineage(const hawkes_stream* stream) {
  return stream && stream->impl.has_lineage ? 1 : 0;
}

double hawkes_stream_t_obs(const hawkes_stream* stream) { return stream ? stream->impl.t_obs : 0.0; }

double hawkes_stream_burn_in(const hawkes_stream* stream) {
  return stream ? stream->impl.burn_in : 0.0;
}

hawkes_status hawkes_stream_columns(const hawkes_stream* stream, double* times, int* types,
                                    long long* cluster_ids, long long* parent_rows,
                                    int* generations) {
  if (auto s = need(stream != nullptr, "null stream")) return s;
  const auto& events = stream->impl.events;
  for (size_t r = 0; r < events.size(); ++r) {
    if (times) times[r] = events[r].time;
    if (types) types[r] = events[r].type;
    if (cluster_ids) cluster_ids[r] = events[r].cluster_id;
    if (parent_rows) parent_rows[r] = events[r].parent;
    if (generations) generations[r] = events[r].generation;
  }
  return HAWKES_OK;
}

hawkes_status hawkes_stream_write_csv(const hawkes_stream* stream, const char* path) {
  if (auto s = need(stream && path, "null argument")) return s;
  return guarded([&] { hawkes::write_events_csv(stream->impl, path); });
}

hawkes_status hawkes_stream_read_csv(const char* path, hawkes_stream** out) {
  if (auto s = need(path && out, "null argument")) return s;
  return guarded([&] { *out = new hawkes_stream{hawkes::read_events_csv(path)}; });
}

/* ---- estimation ---- */

namespace {

hawkes_estimate to_c(const hawkes::Estimate& e) {
  return hawkes_estimate{e.value, e.std_error, e.n_samples};
}

}  // namespace

hawkes_status hawkes_joint_cumulant(const double* data, int n, long long len,
                                    hawkes_estimate* out) {
  if (auto s = need(data && out && n >= 1 && len >= 1, "bad sample layout")) return s;
  return guarded([&] {
    std::vector<std::vector<double>> samples(static_cast<size_t>(n));
    for (int q = 0; q < n; ++q)
      samples[static_cast<size_t>(q)] =
          std::vector<double>(data + static_cast<size_t>(q) * len,
                              data + static_cast<size_t>(q + 1) * len);
    *out = to_c(hawkes::joint_cumulant(samples));
  });
}

hawkes_status hawkes_empirical_integrated_cumulant(const hawkes_stream* stream, const int* types,
                                                   int n, double bin_width, double margin,
                                                   hawkes_estimate* out) {
  if (auto s = need(stream && out, "null argument")) return s;
  return guarded([&] {
    *out = to_c(hawkes::empirical_integrated_cumulant(stream->impl, type_vector(types, n),
                                                      bin_width, margin));
  });
}

hawkes_status hawkes_covariance_density(const hawkes_stream* stream, int type_i, int type_j,
                                        double lag_lo, double lag_step, int bins, double margin,
                                        hawkes_estimate* out) {
  if (auto s = need(stream && out, "null argument")) return s;
  return guarded([&] {
    const auto est = hawkes::covariance_density_estimate(
        stream->impl, type_i, type_j, hawkes::LagGrid{lag_lo, lag_step, bins}, margin);
    for (size_t b = 0; b < est.size(); ++b) out[b] = to_c(est[b]);
  });
}

hawkes_status hawkes_same_cluster_density2(const hawkes_stream* stream, int type_i, int type_j,
                                           double lag_lo, double lag_step, int bins,
                                           double margin, hawkes_estimate* out) {
  if (auto s = need(stream && out, "null argument")) return s;
  return guarded([&] {
    const auto est = hawkes::same_cluster_density2(
        stream->impl, type_i, type_j, hawkes::LagGrid{lag_lo, lag_step, bins}, margin);
    for (size_t b = 0; b < est.size(); ++b) out[b] = to_c(est[b]);
  });
}

hawkes_status hawkes_same_cluster_density3(const hawkes_stream* stream, const int* types3,
                                           double lag2_lo, double lag2_step, int bins2,
                                           double lag3_lo, double lag3_step, int bins3,
                                           double margin, hawkes_estimate* out) {
  if (auto s = need(stream && types3 && out, "null argument")) return s;
  return guarded([&] {
    const auto est = hawkes::same_cluster_density3(
        stream->impl, {types3[0], types3[1], types3[2]},
        hawkes::LagGrid{lag2_lo, lag2_step, bins2}, hawkes::LagGrid{lag3_lo, lag3_step, bins3},
        margin);
    for (size_t b = 0; b < est.size(); ++b) out[b] = to_c(est[b]);
  });
}

/* ---- verification ---- */

hawkes_status hawkes_verify_run(const hawkes_model* model, double t_obs, uint64_t seed,
                                double bin_width, char** out_report_json, int* all_pass) {
  if (auto s = need(model && out_report_json && all_pass, "null argument")) return s;
  return guarded([&] {
    hawkes::VerifyOptions opts;
    opts.t_obs = t_obs;
    opts.seed = seed;
    opts.bin_width = bin_width;
    const auto report = hawkes::run_verify(model->impl, opts);
    *out_report_json = dup_string(hawkes::report_to_json(report));
    *all_pass = report.all_pass ? 1 : 0;
  });
}

void hawkes_string_free(char* text) { delete[] text; }

}  // extern "C"
