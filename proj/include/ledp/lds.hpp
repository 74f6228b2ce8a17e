#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ledp/graph.hpp"

namespace ledp {

/// Geometry of the level data structure for a graph of n nodes and
/// approximation parameter eta:
///   phi    = eta / 5                       (level-threshold base)
///   L      = max(1, ceil(ceil(log_{1+phi} n) / 4))   (levels per group)
///   lambda = (5 - 2 eta) eta / (eta + 5)^2
/// Group cuts grow as (1+phi)^g, and (2+lambda)(1+phi)^2 == 2+eta holds
/// exactly, which pins the noiseless worst-case estimate factor.
struct LdsParams {
  NodeId n = 0;
  double eta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;
  std::uint32_t levels_per_group = 1;

  static LdsParams make(NodeId n, double eta);

  std::uint64_t group_index(std::uint64_t round) const {
    return round / levels_per_group;
  }
  double group_cut(std::uint64_t group) const {
    return std::pow(1.0 + phi, static_cast<double>(group));
  }
  /// log_{1+phi}(x)
  double log_base_phi(double x) const { return std::log(x) / std::log(1.0 + phi); }
};

/// Per-node levels, all zero initially. Levels only ever grow, one step at a
/// time; the coordinator is the only writer between rounds.
class LevelDataStructure {
 public:
  LevelDataStructure(LdsParams params)
      : params_(params), levels_(params.n, 0) {}

  const LdsParams& params() const { return params_; }
  std::uint32_t level(NodeId v) const { return levels_[v]; }
  const std::vector<std::uint32_t>& levels() const { return levels_; }
  void increase(NodeId v) { ++levels_[v]; }

 private:
  LdsParams params_;
  std::vector<std::uint32_t> levels_;
};

/// ĉ(v) = (2 + lambda) (1 + phi)^{max(floor((level+1)/L) - 1, 0)}
std::vector<double> estimate_core_numbers(const std::vector<std::uint32_t>& levels,
                                          const LdsParams& params);

/// Total order derived from levels: smaller levels first, ties broken by
/// node ID. `rank[v]` is v's position; orienting each edge toward the
/// larger rank yields the low out-degree orientation.
struct Ordering {
  std::vector<NodeId> order;  // nodes sorted by (level, id)
  std::vector<NodeId> rank;   // inverse permutation
};

Ordering ordering_from_levels(const std::vector<std::uint32_t>& levels);

}  // namespace ledp
