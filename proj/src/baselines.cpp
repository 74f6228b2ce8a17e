#include "ledp/baselines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace ledp {

KcoreResult run_kcore_baseline(Cluster& cluster, const Mechanisms& mech, double eps,
                               double eta) {
  KcoreConfig cfg;
  cfg.eps = eps;
  cfg.eta = eta;
  cfg.bias = 0.0;
  cfg.uniform_baseline = true;
  cfg.noiseless = mech.noiseless();
  cfg.level_tag = NoiseTag::kBaselineLevel;
  cfg.ledger_prefix = "kcore-baseline";
  return run_kcore(cluster, mech, cfg);
}

double corrected_induced_degree(double noisy_count, std::uint64_t candidates, double eps) {
  const double q = rr_flip_probability(eps);
  return (noisy_count - static_cast<double>(candidates) * q) / (1.0 - 2.0 * q);
}

namespace {

// Materializes the response-perturbed graph, charging eps per node row.
// Every node releases its full upper-triangular row once, so this is a
// single logical communication round of n messages.
std::vector<std::vector<NodeId>> build_noisy_adjacency(const Graph& g,
                                                       const Mechanisms& mech, double eps,
                                                       NoiseTag tag, BudgetLedger& ledger,
                                                       std::string_view label,
                                                       NodeId max_nodes,
                                                       Cluster::Deadline deadline,
                                                       std::uint64_t* edge_count) {
  const NodeId n = g.num_nodes();
  if (n > max_nodes) {
    throw GuardSkip("graph exceeds the materialization guard for the response baseline");
  }
  std::vector<std::vector<NodeId>> adj(n);
  std::uint64_t edges = 0;
  std::vector<std::uint8_t> true_row;
  for (NodeId v = 0; v < n; ++v) {
    if (deadline && std::chrono::steady_clock::now() > *deadline) {
      throw RunTimeout("response baseline exceeded its wall-clock limit");
    }
    ledger.charge(v, label, eps, ChargeScope::kUpperTriangle);
    true_row.assign(n - 1 - v, 0);
    for (NodeId j : g.neighbors(v)) {
      if (j > v) true_row[j - v - 1] = 1;
    }
    const auto noisy_row = randomized_response_row(true_row, eps, mech, tag, v, v + 1);
    for (NodeId i = 0; i < noisy_row.size(); ++i) {
      if (noisy_row[i]) {
        const NodeId k = v + 1 + i;
        adj[v].push_back(k);
        adj[k].push_back(v);
        ++edges;
      }
    }
  }
  if (edge_count != nullptr) *edge_count = edges;
  return adj;
}

}  // namespace

RrPeelResult run_kcore_rr(const Graph& g, const Mechanisms& mech, double eps,
                          BudgetLedger& ledger, NodeId max_nodes,
                          Cluster::Deadline deadline) {
  const NodeId n = g.num_nodes();
  RrPeelResult res;
  auto adj = build_noisy_adjacency(g, mech, eps, NoiseTag::kKcoreRr, ledger, "kcore-rr/rr",
                                   max_nodes, deadline, &res.noisy_edges);
  // Bucket peeling on the noisy graph. The order only depends on the raw
  // noisy induced degrees (the correction shifts all remaining nodes
  // equally), so the integer-degree peel is the corrected-degree peel.
  std::vector<NodeId> deg(n);
  NodeId max_deg = 0;
  for (NodeId v = 0; v < n; ++v) {
    deg[v] = static_cast<NodeId>(adj[v].size());
    max_deg = std::max(max_deg, deg[v]);
  }
  std::vector<NodeId> bucket_start(max_deg + 2, 0);
  for (NodeId v = 0; v < n; ++v) ++bucket_start[deg[v] + 1];
  for (NodeId d = 1; d <= max_deg + 1; ++d) bucket_start[d] += bucket_start[d - 1];
  std::vector<NodeId> order(n), pos(n);
  {
    std::vector<NodeId> cursor(bucket_start.begin(), bucket_start.end() - 1);
    for (NodeId v = 0; v < n; ++v) {
      pos[v] = cursor[deg[v]]++;
      order[pos[v]] = v;
    }
  }
  const double q = mech.noiseless() ? 0.0 : rr_flip_probability(eps);
  res.estimates.assign(n, 0.0);
  double running = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    const NodeId v = order[i];
    const std::uint64_t candidates = n - 1 - i;  // remaining nodes minus v
    const double corrected =
        (static_cast<double>(deg[v]) - static_cast<double>(candidates) * q) /
        (1.0 - 2.0 * q);
    running = std::max(running, corrected);
    res.estimates[v] = std::max(running, 0.0);
    for (NodeId u : adj[v]) {
      if (deg[u] > deg[v]) {
        const NodeId du = deg[u];
        const NodeId head = bucket_start[du];
        const NodeId w = order[head];
        if (w != u) {
          std::swap(order[pos[u]], order[head]);
          std::swap(pos[u], pos[w]);
        }
        ++bucket_start[du];
        --deg[u];
      }
    }
  }
  return res;
}

double tcount_rr_closed_form(std::uint64_t noisy_triangles, std::uint64_t noisy_wedges,
                             std::uint64_t noisy_edges, std::uint64_t n, double eps) {
  const double a = (std::exp(eps) + 1.0) / (std::exp(eps) - 1.0);
  const double b = -1.0 / (std::exp(eps) - 1.0);
  const double nn = static_cast<double>(n);
  const double triples = nn * (nn - 1.0) * (nn - 2.0) / 6.0;
  return a * a * a * static_cast<double>(noisy_triangles) +
         a * a * b * static_cast<double>(noisy_wedges) +
         a * b * b * (nn - 2.0) * static_cast<double>(noisy_edges) + b * b * b * triples;
}

RrTriangleResult run_tcount_rr(const Graph& g, const Mechanisms& mech, double eps,
                               BudgetLedger& ledger, NodeId max_nodes,
                               Cluster::Deadline deadline) {
  const NodeId n = g.num_nodes();
  if (n > max_nodes) {
    throw GuardSkip("graph exceeds the materialization guard for the response baseline");
  }
  RrTriangleResult res;
  // The perturbed graph is near-dense for any eps, so it lives in a packed
  // symmetric bit matrix; triangles come from common-neighbor popcounts.
  const std::uint64_t words = (static_cast<std::uint64_t>(n) + 63) / 64;
  std::vector<std::uint64_t> rows(words * n, 0);
  auto set_bit = [&](NodeId a, NodeId b) {
    rows[words * a + b / 64] |= 1ull << (b % 64);
  };
  std::vector<std::uint8_t> true_row;
  for (NodeId v = 0; v < n; ++v) {
    if (deadline && std::chrono::steady_clock::now() > *deadline) {
      throw RunTimeout("response baseline exceeded its wall-clock limit");
    }
    ledger.charge(v, "tcount-rr/rr", eps, ChargeScope::kUpperTriangle);
    true_row.assign(n - 1 - v, 0);
    for (NodeId j : g.neighbors(v)) {
      if (j > v) true_row[j - v - 1] = 1;
    }
    const auto noisy_row =
        randomized_response_row(true_row, eps, mech, NoiseTag::kTcountRr, v, v + 1);
    for (NodeId i = 0; i < noisy_row.size(); ++i) {
      if (noisy_row[i]) {
        const NodeId k = v + 1 + i;
        set_bit(v, k);
        set_bit(k, v);
        ++res.noisy_edges;
      }
    }
  }
  std::uint64_t wedges = 0;
  std::uint64_t common_sum = 0;
  for (NodeId v = 0; v < n; ++v) {
    const std::uint64_t* row = rows.data() + words * v;
    std::uint64_t deg = 0;
    for (std::uint64_t w = 0; w < words; ++w) deg += std::popcount(row[w]);
    if (deg >= 2) wedges += deg * (deg - 1) / 2;
    // Edges (v, u) with u > v; each triangle is met once per edge.
    for (std::uint64_t w = v / 64; w < words; ++w) {
      std::uint64_t word = row[w];
      if (w == v / 64) word &= ~((2ull << (v % 64)) - 1);  // keep bits above v
      while (word != 0) {
        const NodeId u = static_cast<NodeId>(w * 64 + std::countr_zero(word));
        word &= word - 1;
        const std::uint64_t* other = rows.data() + words * u;
        for (std::uint64_t x = 0; x < words; ++x) {
          common_sum += std::popcount(row[x] & other[x]);
        }
      }
    }
    if (deadline && std::chrono::steady_clock::now() > *deadline) {
      throw RunTimeout("response baseline exceeded its wall-clock limit");
    }
  }
  res.noisy_triangles = common_sum / 3;
  if (mech.noiseless()) {
    res.delta = static_cast<double>(res.noisy_triangles);
  } else {
    res.delta =
        tcount_rr_closed_form(res.noisy_triangles, wedges, res.noisy_edges, n, eps);
  }
  return res;
}

}  // namespace ledp
