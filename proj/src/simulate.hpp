#ifndef HAWKES_SIMULATE_HPP
#define HAWKES_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "model.hpp"

namespace hawkes {

struct Event {
  double time = 0.0;
  int type = 0;               // 1..d
  long long cluster_id = -1;  // -1 when lineage is absent
  long long parent = -2;      // row of the parent, -1 for immigrants, -2 without lineage
  int generation = -1;        // 0 for immigrants, -1 without lineage
};

struct EventStream {
  std::vector<Event> events;  // sorted by (time, type, cluster_id, insertion rank)
  int dim = 0;
  double t_obs = 0.0;
  double burn_in = 0.0;
  uint64_t seed = 0;
  uint64_t model_hash = 0;
  bool has_lineage = false;
};

struct SimOptions {
  double burn_in = -1.0;  // negative: use default_burn_in
  long long cluster_event_cap = 1000000;
  int threads = 0;  // 0: hardware, capped by HAWKES_THREADS
};

// Burn-in long enough for windowed statistics on [0, T] to look stationary.
double default_burn_in(const HawkesModel& model);

// Effective worker count after the HAWKES_THREADS cap.
int worker_count(int requested);

// Exact sampling by the cluster construction: type-k immigrants arrive as a
// unit-cell Poisson stream on [-burn_in, t_obs]; every event of type j at y
// spawns type-i offspring as an inhomogeneous Poisson process with density
// g^{ij}(. - y). Offspring past t_obs are discarded with their subtrees.
// Lineage fields are filled; identical inputs give bit-identical streams.
EventStream simulate_clusters(const HawkesModel& model, double t_obs, uint64_t seed,
                              const SimOptions& opts = {});

// Ogata thinning from the conditional rate; distributionally equivalent to
// the cluster sampler restricted to event times. No lineage.
EventStream simulate_thinning(const HawkesModel& model, double t_obs, uint64_t seed,
                              const SimOptions& opts = {});

}  // namespace hawkes

#endif
