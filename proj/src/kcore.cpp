#include "ledp/kcore.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace ledp {

double threshold_bias(double bias_multiplier, double eps1) {
  return bias_multiplier * 2.0 * std::exp(eps1) / (std::exp(2.0 * eps1) - 1.0);
}

double level_moving_bias(double s) {
  const double d = std::exp(2.0 * s) - 1.0;
  return 6.0 * std::exp(s) / (d * d * d);
}

std::int64_t threshold_from_noisy_degree(double noisy_degree,
                                         std::uint32_t levels_per_group) {
  if (noisy_degree <= 1.0) return 0;
  const auto groups = static_cast<std::int64_t>(std::ceil(std::log2(noisy_degree)));
  return groups * levels_per_group;
}

KcoreResult run_kcore(Cluster& cluster, const Mechanisms& mech, const KcoreConfig& cfg) {
  const NodeId n = cluster.partition().n;
  KcoreResult res;
  res.params = LdsParams::make(n, cfg.eta);
  const std::uint32_t L = res.params.levels_per_group;
  const std::string threshold_label = cfg.ledger_prefix + "/threshold";
  const std::string level_label = cfg.ledger_prefix + "/level";

  res.thresholds.assign(n, 0);
  std::vector<std::uint8_t> active(n, 1);  // permZero flags

  if (cfg.uniform_baseline) {
    // No degree release: every node participates for the full round budget
    // 4 * log^2(n) - 1, and the level noise scale is uniform.
    const auto log_n = static_cast<std::int64_t>(
        std::ceil(res.params.log_base_phi(static_cast<double>(n))));
    const std::int64_t rounds = std::max<std::int64_t>(4 * log_n * log_n - 1, 1);
    std::fill(res.thresholds.begin(), res.thresholds.end(), rounds);
    res.max_threshold = static_cast<std::uint64_t>(rounds);
    res.round_cap = static_cast<std::uint64_t>(rounds);
  } else {
    const double eps1 = cfg.eps1();
    const double bias =
        (cfg.noiseless || cfg.bias == 0.0) ? 0.0 : threshold_bias(cfg.bias, eps1);
    auto maxes = cluster.run_round<std::int64_t>(
        [&](WorkerScope& scope) {
          std::int64_t worker_max = 0;
          for (NodeId v = scope.begin(); v < scope.end(); ++v) {
            const double deg = scope.private_degree(v, threshold_label, eps1 / 2.0,
                                                    ChargeScope::kFullList);
            double noisy =
                deg + mech.geom(eps1 / 2.0, {cfg.threshold_tag, v, 0, 0});
            noisy = noisy + 1.0 - std::min(bias, noisy);
            res.thresholds[v] = threshold_from_noisy_degree(noisy, L);
            worker_max = std::max(worker_max, res.thresholds[v]);
          }
          return worker_max;
        },
        [](const std::int64_t&) { return std::uint64_t{8}; });
    res.max_threshold =
        static_cast<std::uint64_t>(*std::max_element(maxes.begin(), maxes.end()));
    // Safety cap 4 log(n) log2(d~max) - 1, with d~max read back from the
    // released thresholds. It only binds in degenerate corners; the second
    // argument is the operative bound.
    const double log_n = res.params.log_base_phi(static_cast<double>(n));
    res.round_cap = static_cast<std::uint64_t>(std::max<double>(
        std::ceil(4.0 * log_n * (static_cast<double>(res.max_threshold) / L)) - 1.0,
        0.0));
  }

  const std::uint64_t num_rounds = std::min<std::uint64_t>(res.round_cap, res.max_threshold);
  res.rounds = num_rounds;

  LevelDataStructure lds(res.params);
  if (cfg.keep_trace) res.trace.emplace();
  // Bias values are compared against the last group's cut purely for
  // observability; promotion always uses the verbatim bias.
  const double final_cut = res.params.group_cut(res.params.group_index(num_rounds));
  std::atomic<std::uint64_t> bias_cut_exceeded{0};

  for (std::uint64_t r = 0; r < num_rounds; ++r) {
    const double cut = res.params.group_cut(res.params.group_index(r));
    auto bits = cluster.run_round<std::vector<std::uint8_t>>(
        [&](WorkerScope& scope) {
          std::vector<std::uint8_t> next(scope.size(), 0);
          for (NodeId v = scope.begin(); v < scope.end(); ++v) {
            if (res.thresholds[v] == static_cast<std::int64_t>(r)) active[v] = 0;
            if (lds.level(v) != r || !active[v]) continue;
            const auto neighbors = scope.private_neighbors(
                v, level_label, cfg.eps2() / (2.0 * res.thresholds[v]),
                ChargeScope::kFullList);
            std::uint64_t same_level = 0;
            for (NodeId j : neighbors) {
              if (lds.level(j) == r) ++same_level;
            }
            const double s = cfg.eps2() / (2.0 * static_cast<double>(res.thresholds[v]));
            const std::int64_t noise = mech.geom(s, {cfg.level_tag, v, r, 0});
            double bias = 0.0;
            if (!mech.noiseless() && !cfg.uniform_baseline) {
              bias = level_moving_bias(s);
              if (bias > final_cut) bias_cut_exceeded.fetch_add(1, std::memory_order_relaxed);
            }
            const double noisy_count =
                static_cast<double>(same_level) + static_cast<double>(noise) + bias;
            if (noisy_count > cut) {
              next[v - scope.begin()] = 1;
            } else {
              active[v] = 0;
            }
          }
          return next;
        },
        [](const std::vector<std::uint8_t>& b) { return bit_vector_bytes(b.size()); });
    for (std::uint32_t w = 0; w < cluster.workers(); ++w) {
      const NodeId base = cluster.partition().begin(w);
      for (NodeId i = 0; i < bits[w].size(); ++i) {
        if (bits[w][i]) lds.increase(base + i);
      }
    }
    cluster.publish(8ull * n);  // fresh LDS snapshot
    if (res.trace) res.trace->push_back(lds.levels());
  }

  res.bias_cut_exceeded = bias_cut_exceeded.load();
  res.levels = lds.levels();
  res.estimates = estimate_core_numbers(res.levels, res.params);
  res.ordering = ordering_from_levels(res.levels);
  return res;
}

}  // namespace ledp
