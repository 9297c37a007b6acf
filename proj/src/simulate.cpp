#include "simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <future>
#include <numeric>
#include <thread>

#include "errors.hpp"
#include "rng.hpp"

namespace hawkes {

namespace {

constexpr uint64_t kTagImmigrant = 0xA1;
constexpr uint64_t kTagCluster = 0xC7;
constexpr uint64_t kTagThinning = 0x71;

struct Immigrant {
  double time;
  int type;      // 1..d
  uint64_t cell; // hashed cell key parts
  uint64_t idx;
};

struct LocalEvent {
  double time;
  int type;
  long long parent;  // index within the cluster, -1 for the immigrant
  int generation;
};

// one cluster, events in spawn order
std::vector<LocalEvent> grow_cluster(const HawkesModel& model, const Immigrant& imm,
                                     uint64_t seed, double t_obs, long long cap) {
  RngStream rng(seed, kTagCluster, static_cast<uint64_t>(imm.type), imm.cell, imm.idx);
  const int d = model.dim();
  std::vector<LocalEvent> events{{imm.time, imm.type, -1, 0}};
  for (size_t head = 0; head < events.size(); ++head) {
    const double y = events[head].time;
    const int j = events[head].type;
    const int gen = events[head].generation;
    for (int i = 1; i <= d; ++i) {
      const Kernel& kernel = model.kernel(i - 1, j - 1);
      if (kernel.is_zero()) continue;
      const long count = rng.poisson(kernel.integral());
      for (long c = 0; c < count; ++c) {
        const double offset = kernel.inverse_cumulative(rng.uniform() * kernel.integral());
        const double t = y + offset;
        if (t > t_obs) continue;  // the subtree rooted here cannot be observed
        events.push_back({t, i, static_cast<long long>(head), gen + 1});
        require(static_cast<long long>(events.size()) <= cap, ErrorCode::explosion,
                "cluster exceeded the event cap; model is too close to criticality");
      }
    }
  }
  return events;
}

}  // namespace

double default_burn_in(const HawkesModel& model) {
  const double scale = model.max_timescale();
  if (scale == 0.0) return 0.0;
  return 20.0 * scale / (1.0 - model.rho());
}

int worker_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* cap = std::getenv("HAWKES_THREADS")) {
    const int limit = std::atoi(cap);
    if (limit > 0) n = std::min(n, limit);
  }
  return n;
}

EventStream simulate_clusters(const HawkesModel& model, double t_obs, uint64_t seed,
                              const SimOptions& opts) {
  require(t_obs > 0.0, ErrorCode::invalid_argument, "observation horizon must be positive");
  const double burn_in = opts.burn_in < 0.0 ? default_burn_in(model) : opts.burn_in;
  const int d = model.dim();

  // immigrants: Poisson(mu_k) per unit cell, then clipped to [-burn_in, t_obs];
  // cell-keyed substreams keep draws shared between runs that differ only in
  // the burn-in length
  std::vector<Immigrant> immigrants;
  const auto cell_lo = static_cast<long long>(std::floor(-burn_in));
  const auto cell_hi = static_cast<long long>(std::ceil(t_obs));
  for (int k = 1; k <= d; ++k) {
    const double mu = model.mu()[k - 1];
    for (long long cell = cell_lo; cell < cell_hi; ++cell) {
      const auto cell_key = static_cast<uint64_t>(cell);
      RngStream rng(seed, kTagImmigrant, static_cast<uint64_t>(k), cell_key);
      const long count = rng.poisson(mu);
      for (long c = 0; c < count; ++c) {
        const double t = static_cast<double>(cell) + rng.uniform();
        if (t < -burn_in || t > t_obs) continue;
        immigrants.push_back({t, k, cell_key, static_cast<uint64_t>(c)});
      }
    }
  }

  // one independent substream per cluster; chunked across workers with a
  // deterministic merge in immigrant order
  std::vector<std::vector<LocalEvent>> clusters(immigrants.size());
  const int workers =
      immigrants.size() > 2000 ? worker_count(opts.threads) : 1;
  if (workers <= 1) {
    for (size_t c = 0; c < immigrants.size(); ++c)
      clusters[c] = grow_cluster(model, immigrants[c], seed, t_obs, opts.cluster_event_cap);
  } else {
    std::vector<std::future<void>> jobs;
    std::atomic<size_t> cursor{0};
    for (int w = 0; w < workers; ++w)
      jobs.push_back(std::async(std::launch::async, [&]() {
        for (;;) {
          const size_t begin = cursor.fetch_add(64);
          if (begin >= immigrants.size()) return;
          const size_t end = std::min(begin + 64, immigrants.size());
          for (size_t c = begin; c < end; ++c)
            clusters[c] = grow_cluster(model, immigrants[c], seed, t_obs, opts.cluster_event_cap);
        }
      }));
    for (auto& j : jobs) j.get();
  }

  struct Staged {
    Event event;
    long long rank;  // pre-sort position
  };
  std::vector<Staged> staged;
  long long rank = 0;
  for (size_t c = 0; c < clusters.size(); ++c) {
    const long long base = rank;
    for (const LocalEvent& le : clusters[c]) {
      Event e;
      e.time = le.time;
      e.type = le.type;
      e.cluster_id = static_cast<long long>(c);
      e.parent = le.parent < 0 ? -1 : base + le.parent;  // pre-sort index for now
      e.generation = le.generation;
      staged.push_back({e, rank++});
    }
  }
  std::sort(staged.begin(), staged.end(), [](const Staged& a, const Staged& b) {
    if (a.event.time != b.event.time) return a.event.time < b.event.time;
    if (a.event.type != b.event.type) return a.event.type < b.event.type;
    if (a.event.cluster_id != b.event.cluster_id) return a.event.cluster_id < b.event.cluster_id;
    return a.rank < b.rank;
  });
  std::vector<long long> row_of(staged.size());
  for (size_t r = 0; r < staged.size(); ++r) row_of[static_cast<size_t>(staged[r].rank)] = static_cast<long long>(r);

  EventStream out;
  out.dim = d;
  out.t_obs = t_obs;
  out.burn_in = burn_in;
  out.seed = seed;
  out.model_hash = model.param_hash();
  out.has_lineage = true;
  out.events.reserve(staged.size());
  for (const Staged& st : staged) {
    Event e = st.event;
    if (e.parent >= 0) e.parent = row_of[static_cast<size_t>(e.parent)];
    out.events.push_back(e);
  }
  return out;
}

EventStream simulate_thinning(const HawkesModel& model, double t_obs, uint64_t seed,
                              const SimOptions& opts) {
  require(t_obs > 0.0, ErrorCode::invalid_argument, "observation horizon must be positive");
  const double burn_in = opts.burn_in < 0.0 ? default_burn_in(model) : opts.burn_in;
  const int d = model.dim();
  RngStream rng(seed, kTagThinning);

  // exponential kernels keep an exactly-decaying state; grid kernels keep a
  // window of recent events per source type
  std::vector<double> exp_state(static_cast<size_t>(d) * d, 0.0);  // sum exp(-beta (t-y))
  std::vector<std::deque<double>> window(d);
  std::vector<double> window_span(d, 0.0);
  bool any_grid = false;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      const Kernel& k = model.kernel(i, j);
      if (k.type() == Kernel::Type::grid) {
        any_grid = true;
        window_span[j] = std::max(window_span[j], k.timescale());
      }
    }

  const double mu_total = std::accumulate(model.mu().begin(), model.mu().end(), 0.0);

  auto advance = [&](double from, double to) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const Kernel& k = model.kernel(i, j);
        if (k.type() == Kernel::Type::exponential)
          exp_state[static_cast<size_t>(i) * d + j] *= std::exp(-k.beta() * (to - from));
      }
  };
  auto rates = [&](double t, std::vector<double>& out) {
    for (int i = 0; i < d; ++i) {
      double r = model.mu()[i];
      for (int j = 0; j < d; ++j) {
        const Kernel& k = model.kernel(i, j);
        if (k.type() == Kernel::Type::exponential) {
          r += k.alpha() * k.beta() * exp_state[static_cast<size_t>(i) * d + j];
        } else if (k.type() == Kernel::Type::grid) {
          for (double y : window[j]) r += k(t - y);
        }
      }
      out[i] = r;
    }
  };
  auto bound = [&](double t) {
    double b = mu_total;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const Kernel& k = model.kernel(i, j);
        if (k.type() == Kernel::Type::exponential) {
          b += k.alpha() * k.beta() * exp_state[static_cast<size_t>(i) * d + j];
        } else if (k.type() == Kernel::Type::grid) {
          for (double y : window[j]) b += k.envelope(t - y);
        }
      }
    return b;
  };

  EventStream out;
  out.dim = d;
  out.t_obs = t_obs;
  out.burn_in = burn_in;
  out.seed = seed;
  out.model_hash = model.param_hash();
  out.has_lineage = false;

  double t = -burn_in;
  std::vector<double> lam(d);
  for (;;) {
    const double b = bound(t);
    require(b > 0.0 && std::isfinite(b), ErrorCode::bound, "no finite intensity bound");
    const double step = rng.exponential(b);
    const double t_cand = t + step;
    if (t_cand > t_obs) break;
    advance(t, t_cand);
    t = t_cand;
    if (any_grid)
      for (int j = 0; j < d; ++j)
        while (!window[j].empty() && t - window[j].front() > window_span[j]) window[j].pop_front();
    rates(t, lam);
    const double total = std::accumulate(lam.begin(), lam.end(), 0.0);
    if (rng.uniform() * b > total) continue;  // rejected candidate
    double pick = rng.uniform() * total;
    int type = 1;
    for (; type < d; ++type) {
      if (pick < lam[type - 1]) break;
      pick -= lam[type - 1];
    }
    Event e;
    e.time = t;
    e.type = type;
    out.events.push_back(e);
    for (int i = 0; i < d; ++i) {
      const Kernel& k = model.kernel(i, type - 1);
      if (k.type() == Kernel::Type::exponential) exp_state[static_cast<size_t>(i) * d + type - 1] += 1.0;
    }
    if (window_span[type - 1] > 0.0) window[type - 1].push_back(t);
  }
  return out;
}

}  // namespace hawkes
