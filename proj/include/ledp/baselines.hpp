#pragma once

#include <cstdint>
#include <vector>

#include "ledp/kcore.hpp"
#include "ledp/noise.hpp"
#include "ledp/sim.hpp"

namespace ledp {

/// Raised when a baseline refuses to run under its resource guard; the
/// experiment layer turns this into a SKIPPED row rather than a failure.
class GuardSkip : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Prior-work level structure without thresholding or bias: every node
/// participates for 4 log^2(n) - 1 rounds and the per-round noise scale is
/// uniform, eps / (2 * rounds). Shares the thresholded code path.
KcoreResult run_kcore_baseline(Cluster& cluster, const Mechanisms& mech, double eps,
                               double eta);

/// Unbiased induced-degree correction for peeling a response-perturbed
/// graph: (noisy_count - candidates * q) / (1 - 2q), q = 1/(e^eps + 1).
double corrected_induced_degree(double noisy_count, std::uint64_t candidates, double eps);

struct RrPeelResult {
  std::vector<double> estimates;
  std::uint64_t noisy_edges = 0;
};

/// Peels the randomized-response graph at eps, correcting induced degrees at
/// removal time. Estimates are clamped at zero. Throws GuardSkip when the
/// materialized noisy graph would exceed the node guard.
RrPeelResult run_kcore_rr(const Graph& g, const Mechanisms& mech, double eps,
                          BudgetLedger& ledger, NodeId max_nodes = 100000,
                          Cluster::Deadline deadline = {});

/// Closed-form triple sum over debiased response bits:
///   sum_{j<k<l} t_jk t_kl t_jl
///     = a^3 T~ + a^2 b W~ + a b^2 (n-2) E~ + b^3 C(n,3)
/// with a = (e^eps+1)/(e^eps-1), b = -1/(e^eps-1), and T~/W~/E~ the noisy
/// graph's triangle, wedge, and edge counts.
double tcount_rr_closed_form(std::uint64_t noisy_triangles, std::uint64_t noisy_wedges,
                             std::uint64_t noisy_edges, std::uint64_t n, double eps);

struct RrTriangleResult {
  double delta = 0.0;
  std::uint64_t noisy_edges = 0;
  std::uint64_t noisy_triangles = 0;
};

/// Randomized-response triangle baseline: perturb the upper triangle at eps,
/// then evaluate the debiased triple sum in closed form.
RrTriangleResult run_tcount_rr(const Graph& g, const Mechanisms& mech, double eps,
                               BudgetLedger& ledger, NodeId max_nodes = 100000,
                               Cluster::Deadline deadline = {});

}  // namespace ledp
