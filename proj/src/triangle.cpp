#include "ledp/triangle.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace ledp {

namespace {

inline std::uint64_t pair_index(NodeId n, NodeId j, NodeId k) {
  // Row-major upper triangle: row j holds columns j+1..n-1.
  return static_cast<std::uint64_t>(j) * n - (static_cast<std::uint64_t>(j) * (j + 1)) / 2 +
         (k - j - 1);
}

}  // namespace

int noisy_pair_bit(const Graph& g, const Mechanisms& mech, double eps, NodeId j, NodeId k) {
  assert(j != k);
  if (j > k) std::swap(j, k);
  const int true_bit = g.has_edge(j, k) ? 1 : 0;
  const bool flip = mech.rr_flip(eps, {NoiseTag::kTriangleRr, j, 0, k});
  return true_bit ^ static_cast<int>(flip);
}

NoisyEdgeMatrix NoisyEdgeMatrix::from_packed(NodeId n, std::vector<std::uint64_t> bits) {
  NoisyEdgeMatrix m;
  m.n_ = n;
  m.bits_ = std::move(bits);
  return m;
}

NoisyEdgeMatrix NoisyEdgeMatrix::streaming(const Graph& g, const Mechanisms& mech,
                                           double eps) {
  NoisyEdgeMatrix m;
  m.n_ = g.num_nodes();
  m.graph_ = &g;
  m.mech_ = &mech;
  m.eps_ = eps;
  return m;
}

int NoisyEdgeMatrix::bit(NodeId j, NodeId k) const {
  assert(j != k);
  if (j > k) std::swap(j, k);
  if (graph_ != nullptr) return noisy_pair_bit(*graph_, *mech_, eps_, j, k);
  const std::uint64_t idx = pair_index(n_, j, k);
  return static_cast<int>((bits_[idx >> 6] >> (idx & 63)) & 1);
}

std::int64_t dmax_aggregate(const std::vector<std::int64_t>& worker_maxes, NodeId n,
                            double eps) {
  if (worker_maxes.empty()) throw std::invalid_argument("no worker out-degree reports");
  const std::int64_t raw = *std::max_element(worker_maxes.begin(), worker_maxes.end());
  const double slack = 12.0 * std::log(static_cast<double>(n)) / eps;
  const auto total = static_cast<std::int64_t>(std::ceil(static_cast<double>(raw) + slack));
  return std::max<std::int64_t>(total, 1);
}

TriangleResult run_triangle(const Graph& g, Cluster& cluster, const Mechanisms& mech,
                            const TriangleConfig& cfg) {
  const NodeId n = g.num_nodes();
  const double stage_eps = cfg.eps / 4.0;

  TriangleResult res;
  KcoreConfig kc;
  kc.eps = stage_eps;
  kc.fraction = cfg.fraction;
  kc.bias = cfg.bias;
  kc.eta = cfg.eta;
  kc.noiseless = cfg.noiseless;
  kc.ledger_prefix = "tcount/kcore";
  res.ordering_stage = run_kcore(cluster, mech, kc);
  const std::vector<NodeId>& rank = res.ordering_stage.ordering.rank;
  cluster.publish(8ull * n);  // Z

  // Round 1: randomized response over each node's upper-triangular row.
  if (!cfg.rr_streaming && n > cfg.max_materialized_nodes) {
    throw std::runtime_error(
        "graph too large to materialize the response matrix; rerun with row streaming");
  }
  NoisyEdgeMatrix noisy;
  if (cfg.rr_streaming) {
    auto rows = cluster.run_round<std::uint64_t>(
        [&](WorkerScope& scope) {
          std::uint64_t row_bits = 0;
          for (NodeId v = scope.begin(); v < scope.end(); ++v) {
            scope.private_neighbors(v, "tcount/rr", stage_eps, ChargeScope::kUpperTriangle);
            row_bits += n - 1 - v;
          }
          return row_bits;
        },
        [](const std::uint64_t& bits) { return (bits + 7) / 8; });
    (void)rows;
    noisy = NoisyEdgeMatrix::streaming(g, mech, stage_eps);
  } else {
    // Workers emit packed rows; the coordinator assembles the triangle so no
    // two threads ever touch the same word.
    auto rows = cluster.run_round<std::vector<std::uint8_t>>(
        [&](WorkerScope& scope) {
          std::uint64_t local_bits = 0;
          for (NodeId v = scope.begin(); v < scope.end(); ++v) local_bits += n - 1 - v;
          std::vector<std::uint8_t> packed((local_bits + 7) / 8, 0);
          std::uint64_t cursor = 0;
          std::vector<std::uint8_t> true_row;
          for (NodeId v = scope.begin(); v < scope.end(); ++v) {
            auto nbrs =
                scope.private_neighbors(v, "tcount/rr", stage_eps, ChargeScope::kUpperTriangle);
            true_row.assign(n - 1 - v, 0);
            for (NodeId j : nbrs) {
              if (j > v) true_row[j - v - 1] = 1;
            }
            const auto noisy_row = randomized_response_row(
                true_row, stage_eps, mech, NoiseTag::kTriangleRr, v, v + 1);
            for (std::uint8_t bit : noisy_row) {
              if (bit) packed[cursor >> 3] |= static_cast<std::uint8_t>(1u << (cursor & 7));
              ++cursor;
            }
          }
          return packed;
        },
        [](const std::vector<std::uint8_t>& p) { return p.size(); });
    const std::uint64_t total_bits = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    std::vector<std::uint64_t> packed((total_bits + 63) / 64, 0);
    std::uint64_t bit_cursor = 0;
    for (std::uint32_t w = 0; w < cluster.workers(); ++w) {
      std::uint64_t worker_bits = 0;
      for (NodeId v = cluster.partition().begin(w); v < cluster.partition().end(w); ++v) {
        worker_bits += n - 1 - v;
      }
      const auto& row = rows[w];
      for (std::uint64_t i = 0; i < worker_bits; ++i) {
        if (row[i >> 3] & (1u << (i & 7))) {
          const std::uint64_t idx = bit_cursor + i;
          packed[idx >> 6] |= 1ull << (idx & 63);
        }
      }
      bit_cursor += worker_bits;
    }
    noisy = NoisyEdgeMatrix::from_packed(n, std::move(packed));
  }
  cluster.publish(noisy.packed_bytes());  // X

  // Round 2: noisy max out-degree.
  auto maxes = cluster.run_round<std::int64_t>(
      [&](WorkerScope& scope) {
        std::int64_t worker_max = 0;
        for (NodeId v = scope.begin(); v < scope.end(); ++v) {
          auto nbrs =
              scope.private_neighbors(v, "tcount/outdeg", stage_eps, ChargeScope::kOutgoing);
          std::int64_t out = 0;
          for (NodeId j : nbrs) {
            if (rank[j] > rank[v]) ++out;
          }
          out += mech.geom(stage_eps, {NoiseTag::kTriangleOutDegree, v, 0, 0});
          worker_max = std::max(worker_max, out);
        }
        return worker_max;
      },
      [](const std::int64_t&) { return std::uint64_t{8}; });
  res.dmax = dmax_aggregate(maxes, n, cfg.eps);
  cluster.publish(8);  // d~max

  // Round 3: truncated oriented counting with the debiased pair estimator.
  std::atomic<std::uint64_t> truncated{0};
  auto contributions = cluster.run_round<std::vector<double>>(
      [&](WorkerScope& scope) {
        std::vector<double> per_node(scope.size(), 0.0);
        std::vector<NodeId> outs;
        for (NodeId v = scope.begin(); v < scope.end(); ++v) {
          auto nbrs =
              scope.private_neighbors(v, "tcount/count", stage_eps, ChargeScope::kOutgoing);
          outs.clear();
          for (NodeId j : nbrs) {  // ascending by node ID already
            if (rank[j] > rank[v]) outs.push_back(j);
          }
          const std::size_t limit =
              std::min<std::size_t>(static_cast<std::size_t>(res.dmax), outs.size());
          if (limit < outs.size()) truncated.fetch_add(1, std::memory_order_relaxed);
          double sum = 0.0;
          for (std::size_t i1 = 0; i1 < limit; ++i1) {
            for (std::size_t i2 = i1 + 1; i2 < limit; ++i2) {
              sum += mech.debias(noisy.bit(outs[i1], outs[i2]), stage_eps);
            }
          }
          sum += mech.laplace(stage_eps / (2.0 * static_cast<double>(res.dmax)),
                              {NoiseTag::kTriangleLaplace, v, 0, 0});
          per_node[v - scope.begin()] = sum;
        }
        return per_node;
      },
      [](const std::vector<double>&) { return std::uint64_t{8}; });
  res.truncated_nodes = truncated.load();

  // Summing per-node contributions in node order keeps the total bit-exact
  // for any worker count.
  res.worker_partials.resize(cluster.workers(), 0.0);
  double delta = 0.0;
  for (std::uint32_t w = 0; w < cluster.workers(); ++w) {
    double partial = 0.0;
    for (double c : contributions[w]) partial += c;
    res.worker_partials[w] = partial;
    for (double c : contributions[w]) delta += c;
  }
  res.delta = delta;
  return res;
}

}  // namespace ledp
