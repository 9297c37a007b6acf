// Command-line front end. Talks to the library exclusively through the
// C API in hawkes/hawkes.h; CLI11 does the argument parsing and
// nlohmann/json the report formatting.
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hawkes/hawkes.h"
#include "json.hpp"

namespace {

using nlohmann::json;

[[noreturn]] void die(hawkes_status status) {
  std::cerr << "error (" << hawkes_status_name(status) << "): " << hawkes_last_error() << "\n";
  std::exit(static_cast<int>(status));
}

void check(hawkes_status status) {
  if (status != HAWKES_OK) die(status);
}

struct ModelHandle {
  hawkes_model* ptr = nullptr;
  ~ModelHandle() { hawkes_model_free(ptr); }
};
struct SummaryHandle {
  hawkes_summary* ptr = nullptr;
  ~SummaryHandle() { hawkes_summary_free(ptr); }
};
struct RenewalHandle {
  hawkes_renewal* ptr = nullptr;
  ~RenewalHandle() { hawkes_renewal_free(ptr); }
};
struct DensityHandle {
  hawkes_density* ptr = nullptr;
  ~DensityHandle() { hawkes_density_free(ptr); }
};
struct StreamHandle {
  hawkes_stream* ptr = nullptr;
  ~StreamHandle() { hawkes_stream_free(ptr); }
};

std::vector<int> parse_types(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) {
    std::cerr << "error: empty --types\n";
    std::exit(static_cast<int>(HAWKES_ERR_INVALID_ARGUMENT));
  }
  return out;
}

std::vector<double> parse_lags(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f.good()) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    std::exit(static_cast<int>(HAWKES_ERR_IO));
  }
  f << doc.dump(2) << "\n";
}

int run_trees(int n, bool count_only) {
  char buf[128];
  check(hawkes_tree_count(n, buf, sizeof buf));
  std::cout << buf << "\n";
  if (count_only) return 0;
  check(hawkes_tree_enumerate(
      n,
      [](const char* encoding, void*) {
        std::cout << encoding << "\n";
        return 0;
      },
      nullptr));
  return 0;
}

int run_analytic(const std::string& model_path, const std::string& types_csv, bool integrated,
                 bool density, const std::string& lags_csv, int motif_max_power, double dt,
                 double horizon, double tol, int max_order, const std::string& out_path,
                 const std::string& density_csv, double lag_max, double lag_step) {
  ModelHandle model;
  check(hawkes_model_load(model_path.c_str(), &model.ptr));
  SummaryHandle summary;
  check(hawkes_summary_build(model.ptr, tol, &summary.ptr));
  const auto types = parse_types(types_csv);
  const int n = static_cast<int>(types.size());

  json doc;
  doc["types"] = types;

  if (!density) {
    double value = 0.0;
    check(hawkes_integrated_cumulant(summary.ptr, types.data(), n, &value));
    doc["mode"] = "integrated";
    doc["value"] = value;
    if (n >= 2) {
      char count_buf[64];
      check(hawkes_tree_count(n, count_buf, sizeof count_buf));
      const int tree_count = std::atoi(count_buf);
      std::vector<double> terms(static_cast<size_t>(tree_count));
      int got = 0;
      check(hawkes_integrated_cumulant_terms(summary.ptr, types.data(), n, terms.data(),
                                             tree_count, &got));
      terms.resize(static_cast<size_t>(got));
      doc["per_tree_terms"] = terms;
    }
    (void)integrated;
  } else {
    const double use_dt = dt > 0.0 ? dt : hawkes_model_default_dt(model.ptr);
    double use_horizon = horizon > 0.0 ? horizon : hawkes_model_default_horizon(model.ptr);
    use_horizon = std::ceil(use_horizon / use_dt) * use_dt;
    RenewalHandle renewal;
    check(hawkes_renewal_solve(model.ptr, use_dt, use_horizon, 0.0, &renewal.ptr));
    DensityHandle dens;
    check(hawkes_density_create(summary.ptr, renewal.ptr, types.data(), n, max_order, &dens.ptr));

    const auto lags = parse_lags(lags_csv);
    if (static_cast<int>(lags.size()) != n - 1) {
      std::cerr << "error: --density needs " << n - 1 << " comma-separated --lags\n";
      return static_cast<int>(HAWKES_ERR_INVALID_ARGUMENT);
    }
    std::vector<double> times{0.0};
    times.insert(times.end(), lags.begin(), lags.end());
    double continuous = 0.0, atomic = 0.0;
    check(hawkes_density_eval(dens.ptr, times.data(), &continuous, &atomic));
    doc["mode"] = "density";
    doc["times"] = times;
    doc["value"] = continuous;
    doc["atomic"] = atomic;
    doc["grid_dt"] = use_dt;
    doc["grid_horizon"] = use_horizon;

    if (!density_csv.empty()) {
      if (n != 2) {
        std::cerr << "error: --density-csv supports order 2 only\n";
        return static_cast<int>(HAWKES_ERR_SIZE);
      }
      std::FILE* f = std::fopen(density_csv.c_str(), "w");
      if (!f) {
        std::cerr << "error: cannot write '" << density_csv << "'\n";
        return static_cast<int>(HAWKES_ERR_IO);
      }
      std::fprintf(f, "lag,continuous\n");
      const auto steps = static_cast<long>(lag_max / lag_step);
      for (long q = -steps; q <= steps; ++q) {
        const double tau = static_cast<double>(q) * lag_step;
        double c = 0.0, a = 0.0;
        std::vector<double> pt{0.0, tau};
        check(hawkes_density_eval(dens.ptr, pt.data(), &c, &a));
        std::fprintf(f, "%.17g,%.17g\n", tau, c);
      }
      std::fclose(f);
      doc["density_csv"] = density_csv;
    }
  }

  if (motif_max_power >= 0) {
    std::vector<double> sums(static_cast<size_t>(motif_max_power) + 1, 0.0);
    check(hawkes_motif_series(summary.ptr, types.data(), n, motif_max_power, sums.data()));
    doc["partial_sums"] = sums;
  }

  emit(doc, out_path);
  return 0;
}

int run_simulate(const std::string& model_path, double t_obs, const std::string& burn_in,
                 uint64_t seed, const std::string& out_path, bool thinning, long long cap,
                 int threads) {
  ModelHandle model;
  check(hawkes_model_load(model_path.c_str(), &model.ptr));
  double burn = -1.0;
  if (!burn_in.empty() && burn_in != "auto") burn = std::stod(burn_in);
  StreamHandle stream;
  if (thinning) {
    check(hawkes_simulate_thinning(model.ptr, t_obs, burn, seed, &stream.ptr));
  } else {
    check(hawkes_simulate_clusters(model.ptr, t_obs, burn, seed, cap, threads, &stream.ptr));
  }
  check(hawkes_stream_write_csv(stream.ptr, out_path.c_str()));
  std::cerr << "wrote " << hawkes_stream_size(stream.ptr) << " events to " << out_path << "\n";
  return 0;
}

int run_estimate(const std::string& events_path, const std::string& types_csv,
                 const std::string& mode, double bin_width, double lag_min, double lag_max,
                 double lag_step, double margin, const std::string& model_path,
                 const std::string& out_path) {
  StreamHandle stream;
  check(hawkes_stream_read_csv(events_path.c_str(), &stream.ptr));
  const auto types = parse_types(types_csv);

  double use_margin = margin;
  if (use_margin < 0.0 && !model_path.empty()) {
    ModelHandle model;
    check(hawkes_model_load(model_path.c_str(), &model.ptr));
    use_margin = hawkes_model_correlation_horizon(model.ptr);
  }

  json doc;
  doc["mode"] = mode;
  doc["types"] = types;

  if (mode == "integrated") {
    if (use_margin < 0.0) use_margin = 0.0;
    hawkes_estimate est{};
    check(hawkes_empirical_integrated_cumulant(stream.ptr, types.data(),
                                               static_cast<int>(types.size()), bin_width,
                                               use_margin, &est));
    doc["bin_width"] = bin_width;
    doc["margin"] = use_margin;
    doc["value"] = est.value;
    doc["std_error"] = est.std_error;
    doc["n_samples"] = est.n_samples;
    emit(doc, out_path);
    return 0;
  }

  const int bins = static_cast<int>(std::llround((lag_max - lag_min) / lag_step));
  if (bins < 1) {
    std::cerr << "error: empty lag grid\n";
    return static_cast<int>(HAWKES_ERR_INVALID_ARGUMENT);
  }
  if (use_margin < 0.0) use_margin = std::max(std::abs(lag_min), std::abs(lag_max));

  std::vector<hawkes_estimate> est;
  json rows = json::array();
  if (mode == "density" || mode == "coincidence") {
    if (types.size() == 2) {
      est.resize(static_cast<size_t>(bins));
      if (mode == "density") {
        check(hawkes_covariance_density(stream.ptr, types[0], types[1], lag_min, lag_step, bins,
                                        use_margin, est.data()));
      } else {
        check(hawkes_same_cluster_density2(stream.ptr, types[0], types[1], lag_min, lag_step,
                                           bins, use_margin, est.data()));
      }
      for (int b = 0; b < bins; ++b)
        rows.push_back({{"lag", lag_min + (b + 0.5) * lag_step},
                        {"value", est[static_cast<size_t>(b)].value},
                        {"std_error", est[static_cast<size_t>(b)].std_error},
                        {"n", est[static_cast<size_t>(b)].n_samples}});
    } else if (types.size() == 3 && mode == "coincidence") {
      est.resize(static_cast<size_t>(bins) * bins);
      check(hawkes_same_cluster_density3(stream.ptr, types.data(), lag_min, lag_step, bins,
                                         lag_min, lag_step, bins, use_margin, est.data()));
      for (int b2 = 0; b2 < bins; ++b2)
        for (int b3 = 0; b3 < bins; ++b3) {
          const auto& e = est[static_cast<size_t>(b2) * bins + b3];
          rows.push_back({{"lag2", lag_min + (b2 + 0.5) * lag_step},
                          {"lag3", lag_min + (b3 + 0.5) * lag_step},
                          {"value", e.value},
                          {"std_error", e.std_error},
                          {"n", e.n_samples}});
        }
    } else {
      std::cerr << "error: mode '" << mode << "' supports 2 types (and 3 for coincidence)\n";
      return static_cast<int>(HAWKES_ERR_INVALID_ARGUMENT);
    }
  } else {
    std::cerr << "error: unknown mode '" << mode << "'\n";
    return static_cast<int>(HAWKES_ERR_INVALID_ARGUMENT);
  }

  doc["margin"] = use_margin;
  doc["bins"] = rows;

  // CSV when the output name asks for it, JSON otherwise
  if (out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".csv") {
    std::ofstream f(out_path);
    if (!f.good()) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return static_cast<int>(HAWKES_ERR_IO);
    }
    if (rows.empty() || rows[0].contains("lag")) {
      f << "lag,value,std_error,n\n";
      for (const auto& r : rows)
        f << r["lag"].get<double>() << "," << r["value"].get<double>() << ","
          << r["std_error"].get<double>() << "," << r["n"].get<long long>() << "\n";
    } else {
      f << "lag2,lag3,value,std_error,n\n";
      for (const auto& r : rows)
        f << r["lag2"].get<double>() << "," << r["lag3"].get<double>() << ","
          << r["value"].get<double>() << "," << r["std_error"].get<double>() << ","
          << r["n"].get<long long>() << "\n";
    }
  } else {
    emit(doc, out_path);
  }
  return 0;
}

int run_verify(const std::string& model_path, double t_obs, uint64_t seed, double bin_width,
               const std::string& out_path) {
  ModelHandle model;
  check(hawkes_model_load(model_path.c_str(), &model.ptr));
  char* report = nullptr;
  int all_pass = 0;
  check(hawkes_verify_run(model.ptr, t_obs, seed, bin_width, &report, &all_pass));
  const json doc = json::parse(report);
  hawkes_string_free(report);
  for (const auto& c : doc.at("checks"))
    std::cerr << (c.at("pass").get<bool>() ? "[pass] " : "[FAIL] ") << c.at("name").get<std::string>()
              << ": analytic " << c.at("analytic").get<double>() << " vs empirical "
              << c.at("empirical").get<double>() << " (se " << c.at("std_error").get<double>()
              << ")\n";
  emit(doc, out_path);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cumulants of multivariate Hawkes processes: analytic tree sums and "
               "cluster Monte Carlo verification"};
  app.require_subcommand(1);

  // trees
  auto* trees = app.add_subcommand("trees", "count or list the rooted trees of one order");
  int trees_n = 2;
  bool count_only = false;
  trees->add_option("--n", trees_n, "number of leaves")->required();
  trees->add_flag("--count-only", count_only, "print the count only");

  // analytic
  auto* analytic = app.add_subcommand("analytic", "integrated cumulants and cumulant densities");
  std::string a_model, a_types, a_lags, a_out, a_density_csv;
  bool a_integrated = false, a_density = false;
  int a_motif = -1, a_max_order = 3;
  double a_dt = 0.0, a_horizon = 0.0, a_tol = 0.0, a_lag_max = 10.0, a_lag_step = 0.1;
  analytic->add_option("--model", a_model, "model config (JSON)")->required();
  analytic->add_option("--types", a_types, "comma-separated type multi-index")->required();
  analytic->add_flag("--integrated", a_integrated, "integrated cumulant (default)");
  analytic->add_flag("--density", a_density, "cumulant density at --lags");
  analytic->add_option("--lags", a_lags, "comma-separated lags relative to the first event");
  analytic->add_option("--motif-max-power", a_motif, "include motif partial sums up to this power");
  analytic->add_option("--dt", a_dt, "renewal grid step");
  analytic->add_option("--horizon", a_horizon, "renewal horizon");
  analytic->add_option("--tol", a_tol, "numeric tolerance");
  analytic->add_option("--max-order", a_max_order, "density order cap (4 opt-in)");
  analytic->add_option("--out", a_out, "write the JSON result here");
  analytic->add_option("--density-csv", a_density_csv, "write an order-2 density grid CSV");
  analytic->add_option("--lag-max", a_lag_max, "density CSV lag range");
  analytic->add_option("--lag-step", a_lag_step, "density CSV lag step");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "sample an event stream");
  std::string s_model, s_burn = "auto", s_out;
  double s_T = 0.0;
  uint64_t s_seed = 0;
  bool s_thinning = false;
  long long s_cap = 0;
  int s_threads = 0;
  simulate->add_option("--model", s_model, "model config (JSON)")->required();
  simulate->add_option("--T", s_T, "observation horizon")->required();
  simulate->add_option("--burn-in", s_burn, "burn-in length or 'auto'");
  simulate->add_option("--seed", s_seed, "random seed")->required();
  simulate->add_option("--out", s_out, "events CSV path")->required();
  simulate->add_flag("--thinning", s_thinning, "use the conditional-intensity sampler");
  simulate->add_option("--cap", s_cap, "per-cluster event cap");
  simulate->add_option("--threads", s_threads, "worker cap (0 = hardware)");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "empirical cumulants from an event stream");
  std::string e_events, e_types, e_mode = "integrated", e_model, e_out;
  double e_bin_width = 50.0, e_lag_min = 0.0, e_lag_max = 5.0, e_lag_step = 0.5, e_margin = -1.0;
  estimate->add_option("--events", e_events, "events CSV")->required();
  estimate->add_option("--types", e_types, "comma-separated type multi-index")->required();
  estimate->add_option("--mode", e_mode, "integrated | density | coincidence");
  estimate->add_option("--bin-width", e_bin_width, "count window for integrated mode");
  estimate->add_option("--lag-min", e_lag_min, "lag grid start");
  estimate->add_option("--lag-max", e_lag_max, "lag grid end");
  estimate->add_option("--lag-step", e_lag_step, "lag bin width");
  estimate->add_option("--margin", e_margin, "interior margin (default: from --model)");
  estimate->add_option("--model", e_model, "model config for the default margin");
  estimate->add_option("--out", e_out, "result path (.csv or JSON)");

  // verify
  auto* verify = app.add_subcommand("verify", "simulate, estimate and compare against analytics");
  std::string v_model, v_out;
  double v_T = 1e4, v_bin_width = -1.0;
  uint64_t v_seed = 1;
  verify->add_option("--model", v_model, "model config (JSON)")->required();
  verify->add_option("--T", v_T, "observation horizon");
  verify->add_option("--seed", v_seed, "random seed");
  verify->add_option("--bin-width", v_bin_width, "count window override");
  verify->add_option("--out", v_out, "write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  if (trees->parsed()) return run_trees(trees_n, count_only);
  if (analytic->parsed())
    return run_analytic(a_model, a_types, a_integrated, a_density, a_lags, a_motif, a_dt,
                        a_horizon, a_tol, a_max_order, a_out, a_density_csv, a_lag_max,
                        a_lag_step);
  if (simulate->parsed())
    return run_simulate(s_model, s_T, s_burn, s_seed, s_out, s_thinning, s_cap, s_threads);
  if (estimate->parsed())
    return run_estimate(e_events, e_types, e_mode, e_bin_width, e_lag_min, e_lag_max, e_lag_step,
                        e_margin, e_model, e_out);
  if (verify->parsed()) return run_verify(v_model, v_T, v_seed, v_bin_width, v_out);
  return 1;
}
