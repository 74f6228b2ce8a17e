#pragma once

#include <cstdint>
#include <vector>

#include "ledp/kcore.hpp"
#include "ledp/noise.hpp"
#include "ledp/sim.hpp"

namespace ledp {

struct TriangleConfig {
  double eps = 1.0;
  // The ordering stage runs the thresholded k-core algorithm at eps/4 with
  // its usual defaults.
  double fraction = 0.8;
  double bias = 8.0;
  double eta = 3.625;
  bool noiseless = false;
  /// Recompute response bits on demand instead of storing the packed upper
  /// triangle. Distribution-identical: bits are a pure function of
  /// (seed, pair), so a lookup regenerates exactly what a worker released.
  bool rr_streaming = false;
  NodeId max_materialized_nodes = 100000;
};

/// Published randomized-response output over the upper-triangular pair set.
class NoisyEdgeMatrix {
 public:
  /// Takes ownership of packed row data laid out row-major over pairs
  /// (j, k), j < k.
  static NoisyEdgeMatrix from_packed(NodeId n, std::vector<std::uint64_t> bits);
  /// On-demand variant backed by the deterministic stream.
  static NoisyEdgeMatrix streaming(const Graph& g, const Mechanisms& mech, double eps);

  /// Response bit for an unordered pair; j == k is a caller bug.
  int bit(NodeId j, NodeId k) const;

  NodeId num_nodes() const { return n_; }
  std::uint64_t logical_bits() const { return static_cast<std::uint64_t>(n_) * (n_ - 1) / 2; }
  std::uint64_t packed_bytes() const { return (logical_bits() + 7) / 8; }
  bool streaming_mode() const { return graph_ != nullptr; }

 private:
  NodeId n_ = 0;
  std::vector<std::uint64_t> bits_;
  const Graph* graph_ = nullptr;
  const Mechanisms* mech_ = nullptr;
  double eps_ = 0.0;
};

/// The response bit of pair {j, k}: the true adjacency bit, flipped with
/// probability 1/(e^eps + 1). Keyed on the smaller endpoint and the column,
/// which is what makes streaming regeneration exact.
int noisy_pair_bit(const Graph& g, const Mechanisms& mech, double eps, NodeId j, NodeId k);

/// d~max = ceil(max over worker maxima + 12 ln(n) / eps), floored at 1.
/// The additive slack uses the full pipeline eps. Throws on an empty set.
std::int64_t dmax_aggregate(const std::vector<std::int64_t>& worker_maxes, NodeId n,
                            double eps);

struct TriangleResult {
  double delta = 0.0;  // may be negative
  std::int64_t dmax = 0;
  std::vector<double> worker_partials;
  KcoreResult ordering_stage;
  std::uint64_t truncated_nodes = 0;  // nodes whose out-list the cap shortened
};

/// Full pipeline: k-core ordering at eps/4, then randomized response, noisy
/// max out-degree, and truncated oriented counting, each at eps/4.
TriangleResult run_triangle(const Graph& g, Cluster& cluster, const Mechanisms& mech,
                            const TriangleConfig& cfg);

}  // namespace ledp
