#include "estimate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "errors.hpp"

namespace hawkes {

BinnedCounts bin_counts(const EventStream& stream, double bin_width, double margin) {
  require(bin_width > 0.0, ErrorCode::invalid_argument, "bin width must be positive");
  require(margin >= 0.0, ErrorCode::invalid_argument, "margin must be non-negative");
  BinnedCounts out;
  out.bin_width = bin_width;
  out.margin = margin;
  out.dim = stream.dim;
  const double span = stream.t_obs - 2.0 * margin;
  out.interior_bins = span > 0.0 ? static_cast<long long>(std::floor(span / bin_width)) : 0;
  require(out.interior_bins >= 1, ErrorCode::window, "no interior bins fit the margin");
  out.counts.assign(static_cast<size_t>(out.interior_bins), std::vector<long long>(stream.dim, 0));
  for (const Event& e : stream.events) {
    const double pos = (e.time - margin) / bin_width;
    if (pos < 0.0) continue;
    const auto b = static_cast<long long>(pos);
    if (b >= out.interior_bins) continue;
    ++out.counts[static_cast<size_t>(b)][e.type - 1];
  }
  return out;
}

std::vector<double> subset_moments(const std::vector<std::vector<double>>& samples) {
  const int n = static_cast<int>(samples.size());
  require(n >= 1 && n <= 6, ErrorCode::size, "moment machinery supports 1..6 variables");
  const size_t len = samples[0].size();
  for (const auto& s : samples)
    require(s.size() == len, ErrorCode::invalid_argument, "sample lengths differ");
  std::vector<double> moments(static_cast<size_t>(1) << n, 0.0);
  for (size_t t = 0; t < len; ++t) {
    for (int mask = 1; mask < (1 << n); ++mask) {
      double p = 1.0;
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) p *= samples[i][t];
      moments[mask] += p;
    }
  }
  for (int mask = 1; mask < (1 << n); ++mask) moments[mask] /= static_cast<double>(len);
  return moments;
}

namespace {

// partitions of the index set `mask`; blocks are produced with the lowest
// remaining element leading, so each partition appears exactly once
void for_each_partition_of_mask(int mask, std::vector<int>& blocks,
                                const std::function<void(const std::vector<int>&)>& fn) {
  if (mask == 0) {
    fn(blocks);
    return;
  }
  const int low = mask & -mask;
  const int rest = mask ^ low;
  for (int sub = rest;; sub = (sub - 1) & rest) {
    blocks.push_back(low | sub);
    for_each_partition_of_mask(mask ^ (low | sub), blocks, fn);
    blocks.pop_back();
    if (sub == 0) break;
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

double cumulant_of(int mask, const std::vector<double>& moments) {
  double total = 0.0;
  std::vector<int> blocks;
  for_each_partition_of_mask(mask, blocks, [&](const std::vector<int>& pi) {
    const int b = static_cast<int>(pi.size());
    double prod = 1.0;
    for (int block : pi) prod *= moments[block];
    total += ((b - 1) % 2 == 0 ? 1.0 : -1.0) * factorial(b - 1) * prod;
  });
  return total;
}

double moment_of(int mask, const std::vector<double>& cumulants) {
  double total = 0.0;
  std::vector<int> blocks;
  for_each_partition_of_mask(mask, blocks, [&](const std::vector<int>& pi) {
    double prod = 1.0;
    for (int block : pi) prod *= cumulants[block];
    total += prod;
  });
  return total;
}

Estimate joint_cumulant(const std::vector<std::vector<double>>& samples) {
  const int n = static_cast<int>(samples.size());
  require(n >= 1 && n <= 6, ErrorCode::size, "joint cumulant supports n <= 6");
  const size_t len = samples[0].size();
  require(len >= 30, ErrorCode::window, "need at least 30 aligned samples");

  const int full = (1 << n) - 1;
  // per-sample subset products, kept for the jackknife
  std::vector<std::vector<double>> prods(static_cast<size_t>(full) + 1);
  for (int mask = 1; mask <= full; ++mask) prods[mask].resize(len);
  for (size_t t = 0; t < len; ++t)
    for (int mask = 1; mask <= full; ++mask) {
      const int i = mask & -mask;
      const int rest = mask ^ i;
      const double base = rest ? prods[rest][t] : 1.0;
      prods[mask][t] = base * samples[__builtin_ctz(static_cast<unsigned>(i))][t];
    }
  std::vector<double> sums(static_cast<size_t>(full) + 1, 0.0);
  for (int mask = 1; mask <= full; ++mask)
    for (size_t t = 0; t < len; ++t) sums[mask] += prods[mask][t];

  std::vector<double> moments(static_cast<size_t>(full) + 1, 0.0);
  for (int mask = 1; mask <= full; ++mask) moments[mask] = sums[mask] / static_cast<double>(len);

  Estimate est;
  est.value = cumulant_of(full, moments);
  est.n_samples = static_cast<long long>(len);
  est.method = "jackknife";

  std::vector<double> loo(static_cast<size_t>(full) + 1, 0.0);
  std::vector<double> jack(len);
  for (size_t t = 0; t < len; ++t) {
    for (int mask = 1; mask <= full; ++mask)
      loo[mask] = (sums[mask] - prods[mask][t]) / static_cast<double>(len - 1);
    jack[t] = cumulant_of(full, loo);
  }
  double mean = 0.0;
  for (double v : jack) mean += v;
  mean /= static_cast<double>(len);
  double ss = 0.0;
  for (double v : jack) ss += (v - mean) * (v - mean);
  est.std_error = std::sqrt(ss * static_cast<double>(len - 1) / static_cast<double>(len));
  return est;
}

Estimate empirical_integrated_cumulant(const EventStream& stream, const std::vector<int>& types,
                                       double bin_width, double margin) {
  require(!types.empty() && types.size() <= 6, ErrorCode::size, "supported orders are 1..6");
  for (int t : types)
    require(t >= 1 && t <= stream.dim, ErrorCode::invalid_argument, "type out of range");
  const BinnedCounts binned = bin_counts(stream, bin_width, margin);
  require(binned.interior_bins >= 30, ErrorCode::window,
          "fewer than 30 interior bins; shrink the bin width or margin");
  std::vector<std::vector<double>> samples(types.size());
  for (size_t q = 0; q < types.size(); ++q) {
    samples[q].resize(static_cast<size_t>(binned.interior_bins));
    for (long long b = 0; b < binned.interior_bins; ++b)
      samples[q][static_cast<size_t>(b)] =
          static_cast<double>(binned.counts[static_cast<size_t>(b)][types[q] - 1]);
  }
  Estimate est = joint_cumulant(samples);
  est.value /= bin_width;
  est.std_error /= bin_width;
  return est;
}

namespace {

struct BatchLayout {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double block = 0.0;
  int batches = 0;
  int index(double t) const {
    const int b = static_cast<int>((t - t_lo) / block);
    return std::clamp(b, 0, batches - 1);
  }
};

Estimate batch_mean(const std::vector<double>& per_batch, double scale, long long n_samples) {
  Estimate est;
  const auto b = static_cast<double>(per_batch.size());
  double mean = 0.0;
  for (double v : per_batch) mean += v;
  mean /= b;
  double ss = 0.0;
  for (double v : per_batch) ss += (v - mean) * (v - mean);
  est.value = mean * scale;
  est.std_error = std::sqrt(ss / (b * (b - 1.0))) * scale;
  est.n_samples = n_samples;
  est.method = "batch-means";
  return est;
}

void check_margin(const EventStream& stream, const LagGrid& grid, double margin, int batches) {
  require(grid.bins >= 1 && grid.step > 0.0, ErrorCode::invalid_argument, "bad lag grid");
  const double reach = std::max(std::fabs(grid.lo), std::fabs(grid.hi()));
  require(margin >= reach, ErrorCode::window,
          "margin must cover the lag reach so target events stay inside the data");
  require(batches >= 2, ErrorCode::invalid_argument, "need at least 2 batches");
  require(stream.t_obs - 2.0 * margin > 0.0, ErrorCode::window, "margin leaves no interior window");
}

}  // namespace

namespace {

enum class PairFilter { all, same_cluster, different_cluster };

std::vector<Estimate> pair_density(const EventStream& stream, int type_i, int type_j,
                                   const LagGrid& grid, double margin, int batches,
                                   PairFilter filter, bool subtract_rate_product) {
  if (filter != PairFilter::all)
    require(stream.has_lineage, ErrorCode::lineage, "stream lacks lineage fields");
  check_margin(stream, grid, margin, batches);
  BatchLayout layout{margin, stream.t_obs - margin, 0.0, batches};
  layout.block = (layout.t_hi - layout.t_lo) / batches;

  std::vector<size_t> ref_rows, target_rows;
  for (size_t r = 0; r < stream.events.size(); ++r) {
    const Event& e = stream.events[r];
    if (e.type == type_i && e.time >= layout.t_lo && e.time < layout.t_hi) ref_rows.push_back(r);
    if (e.type == type_j) target_rows.push_back(r);
  }
  long long interior_j = 0;
  for (size_t r : target_rows) {
    const double t = stream.events[r].time;
    if (t >= layout.t_lo && t < layout.t_hi) ++interior_j;
  }
  const double t_eff = layout.t_hi - layout.t_lo;
  const double lam_i = static_cast<double>(ref_rows.size()) / t_eff;
  const double lam_j = static_cast<double>(interior_j) / t_eff;
  const double baseline = subtract_rate_product ? lam_i * lam_j : 0.0;

  std::vector<std::vector<double>> counts(static_cast<size_t>(grid.bins),
                                          std::vector<double>(batches, 0.0));
  size_t lo = 0;
  for (size_t ref : ref_rows) {
    const Event& er = stream.events[ref];
    const double t0 = er.time;
    const int batch = layout.index(t0);
    while (lo < target_rows.size() && stream.events[target_rows[lo]].time < t0 + grid.lo) ++lo;
    for (size_t q = lo; q < target_rows.size(); ++q) {
      const Event& et = stream.events[target_rows[q]];
      const double dtau = et.time - t0;
      if (dtau >= grid.hi()) break;
      if (target_rows[q] == ref) continue;  // never pair an event with itself
      if (filter == PairFilter::same_cluster && et.cluster_id != er.cluster_id) continue;
      if (filter == PairFilter::different_cluster && et.cluster_id == er.cluster_id) continue;
      const int b = static_cast<int>(std::floor((dtau - grid.lo) / grid.step));
      if (b < 0 || b >= grid.bins) continue;
      counts[static_cast<size_t>(b)][batch] += 1.0;
    }
  }

  std::vector<Estimate> out;
  out.reserve(static_cast<size_t>(grid.bins));
  for (int b = 0; b < grid.bins; ++b) {
    std::vector<double> per_batch(static_cast<size_t>(batches));
    long long n = 0;
    for (int k = 0; k < batches; ++k) {
      per_batch[static_cast<size_t>(k)] =
          counts[static_cast<size_t>(b)][static_cast<size_t>(k)] / (layout.block * grid.step) -
          baseline;
      n += static_cast<long long>(counts[static_cast<size_t>(b)][static_cast<size_t>(k)]);
    }
    out.push_back(batch_mean(per_batch, 1.0, n));
  }
  return out;
}

}  // namespace

std::vector<Estimate> covariance_density_estimate(const EventStream& stream, int type_i,
                                                  int type_j, const LagGrid& grid, double margin,
                                                  int batches) {
  return pair_density(stream, type_i, type_j, grid, margin, batches, PairFilter::all, true);
}

std::vector<Estimate> same_cluster_density2(const EventStream& stream, int type_i, int type_j,
                                            const LagGrid& grid, double margin, int batches) {
  return pair_density(stream, type_i, type_j, grid, margin, batches, PairFilter::same_cluster,
                      false);
}

std::vector<Estimate> different_cluster_density2(const EventStream& stream, int type_i,
                                                 int type_j, const LagGrid& grid, double margin,
                                                 int batches) {
  return pair_density(stream, type_i, type_j, grid, margin, batches,
                      PairFilter::different_cluster, false);
}

std::vector<Estimate> same_cluster_density3(const EventStream& stream,
                                            const std::array<int, 3>& types, const LagGrid& grid2,
                                            const LagGrid& grid3, double margin, int batches) {
  require(stream.has_lineage, ErrorCode::lineage, "stream lacks lineage fields");
  check_margin(stream, grid2, margin, batches);
  check_margin(stream, grid3, margin, batches);
  BatchLayout layout{margin, stream.t_obs - margin, 0.0, batches};
  layout.block = (layout.t_hi - layout.t_lo) / batches;

  long long max_cluster = -1;
  for (const Event& e : stream.events) max_cluster = std::max(max_cluster, e.cluster_id);
  std::vector<std::vector<size_t>> members(static_cast<size_t>(max_cluster + 1));
  for (size_t r = 0; r < stream.events.size(); ++r)
    members[static_cast<size_t>(stream.events[r].cluster_id)].push_back(r);

  const int nbins = grid2.bins * grid3.bins;
  std::vector<std::vector<double>> counts(static_cast<size_t>(nbins),
                                          std::vector<double>(batches, 0.0));
  for (const auto& rows : members) {
    for (size_t a : rows) {
      const Event& ea = stream.events[a];
      if (ea.type != types[0] || ea.time < layout.t_lo || ea.time >= layout.t_hi) continue;
      const int batch = layout.index(ea.time);
      for (size_t b : rows) {
        if (b == a) continue;
        const Event& eb = stream.events[b];
        if (eb.type != types[1]) continue;
        const double tau2 = eb.time - ea.time;
        const int bin2 = static_cast<int>(std::floor((tau2 - grid2.lo) / grid2.step));
        if (bin2 < 0 || bin2 >= grid2.bins) continue;
        for (size_t c : rows) {
          if (c == a || c == b) continue;
          const Event& ec = stream.events[c];
          if (ec.type != types[2]) continue;
          const double tau3 = ec.time - ea.time;
          const int bin3 = static_cast<int>(std::floor((tau3 - grid3.lo) / grid3.step));
          if (bin3 < 0 || bin3 >= grid3.bins) continue;
          counts[static_cast<size_t>(bin2 * grid3.bins + bin3)][batch] += 1.0;
        }
      }
    }
  }

  std::vector<Estimate> out;
  for (int b = 0; b < nbins; ++b) {
    std::vector<double> per_batch(static_cast<size_t>(batches));
    long long n = 0;
    for (int k = 0; k < batches; ++k) {
      per_batch[static_cast<size_t>(k)] = counts[static_cast<size_t>(b)][static_cast<size_t>(k)] /
                                          (layout.block * grid2.step * grid3.step);
      n += static_cast<long long>(counts[static_cast<size_t>(b)][static_cast<size_t>(k)]);
    }
    out.push_back(batch_mean(per_batch, 1.0, n));
  }
  return out;
}

}  // namespace hawkes
