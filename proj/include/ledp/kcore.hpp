#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ledp/lds.hpp"
#include "ledp/noise.hpp"
#include "ledp/sim.hpp"

namespace ledp {

/// k-core decomposition configuration. eps splits as eps1 = f*eps for degree
/// thresholding and eps2 = (1-f)*eps for level moving. With uniform_baseline
/// set, thresholding and both bias terms are disabled and the full eps goes
/// to level moving with a uniform per-round scale -- the prior-work variant
/// the thresholded algorithm is compared against.
struct KcoreConfig {
  double eps = 1.0;
  double fraction = 0.8;  // f
  double bias = 8.0;      // b
  double eta = 3.625;     // 2 + eta = 5.625
  bool noiseless = false;
  bool uniform_baseline = false;
  bool keep_trace = false;

  NoiseTag threshold_tag = NoiseTag::kKcoreThreshold;
  NoiseTag level_tag = NoiseTag::kKcoreLevel;
  std::string ledger_prefix = "kcore";

  double eps1() const { return uniform_baseline ? 0.0 : fraction * eps; }
  double eps2() const { return uniform_baseline ? eps : (1.0 - fraction) * eps; }
};

struct KcoreResult {
  LdsParams params;
  std::vector<std::uint32_t> levels;
  std::vector<std::int64_t> thresholds;  // t_v, in levels
  std::vector<double> estimates;
  Ordering ordering;
  std::uint64_t max_threshold = 0;
  std::uint64_t round_cap = 0;     // first argument of the round formula
  std::uint64_t rounds = 0;        // level-moving rounds executed
  std::uint64_t bias_cut_exceeded = 0;  // level-bias values above the final group cut
  // Per-round level snapshots (post-round), present when keep_trace is set.
  std::optional<std::vector<std::vector<std::uint32_t>>> trace;
};

/// Degree-thresholding bias subtrahend b * 2 e^eps / (e^{2 eps} - 1).
double threshold_bias(double bias_multiplier, double eps1);

/// Level-moving additive bias 6 e^s / (e^{2s} - 1)^3.
double level_moving_bias(double s);

/// Threshold from a (possibly biased) noisy degree: ceil(log2(d)) * L,
/// clamped so d <= 1 maps to 0.
std::int64_t threshold_from_noisy_degree(double noisy_degree, std::uint32_t levels_per_group);

/// Runs the full coordinator loop: one thresholding round, then
/// min(round cap, max threshold) level-moving rounds, then core estimation
/// and the level-derived ordering.
KcoreResult run_kcore(Cluster& cluster, const Mechanisms& mech, const KcoreConfig& cfg);

}  // namespace ledp
