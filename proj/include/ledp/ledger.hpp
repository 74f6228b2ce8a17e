#pragma once

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ledp/graph.hpp"

namespace ledp {

/// Which part of a node's private adjacency list a local randomizer read.
/// The per-edge audit only bills a randomizer to the pairs its input can
/// actually depend on:
///  - kFullList: any incident pair (degree, same-level neighbor counts);
///  - kUpperTriangle: only pairs {v, j} with j > v (randomized-response rows);
///  - kOutgoing: only pairs oriented away from v under a published ordering.
enum class ChargeScope : std::uint8_t { kFullList, kUpperTriangle, kOutgoing };

class LedgerViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-node record of privacy charges, one entry per local-randomizer
/// invocation. The audit checks the LEDP sum condition: for the worst node
/// pair {u, v}, the total of all charges whose randomizers depend on that
/// pair must stay within the global budget.
///
/// charge() serializes internally, so concurrent workers may record freely;
/// audits are meant to run after a round of work has quiesced.
class BudgetLedger {
 public:
  explicit BudgetLedger(NodeId n) : per_node_(n), scope_totals_(n) {}

  NodeId num_nodes() const { return static_cast<NodeId>(per_node_.size()); }

  /// Records one eps charge at node v. Labels should be stable stage names
  /// ("kcore/level", "tcount/rr", ...). Throws for eps <= 0.
  void charge(NodeId v, std::string_view label, double eps, ChargeScope scope);

  std::uint64_t total_charges() const;

  struct WorstEdge {
    double total = 0.0;
    NodeId u = 0;
    NodeId v = 0;
    bool exact = true;  // false when the pairwise scan was replaced by a bound
  };

  /// Maximum per-pair charge total. `rank` is the published ordering position
  /// used by outgoing-scoped randomizers (required if any were recorded).
  /// Scans all pairs exactly up to `exact_pair_limit` nodes, above that it
  /// returns a safe upper bound built from per-scope maxima.
  WorstEdge worst_edge(const std::vector<NodeId>* rank = nullptr,
                       NodeId exact_pair_limit = 20000) const;

  /// Verifies worst_edge().total <= eps_total (up to a relative float
  /// tolerance) and returns the attained maximum. On violation, throws
  /// LedgerViolation naming the charge sequence of the offending pair.
  double assert_within(double eps_total, const std::vector<NodeId>* rank = nullptr,
                       double rel_tol = 1e-9) const;

  /// Aggregated audit record, one entry per (node, label, scope).
  struct Entry {
    std::string label;
    ChargeScope scope;
    double eps_total = 0.0;
    std::uint64_t count = 0;
  };
  const std::vector<Entry>& entries(NodeId v) const { return per_node_[v]; }

  /// JSON audit dump: per-node aggregated charges.
  void dump_json(std::ostream& out) const;

 private:
  struct ScopeTotals {
    double full = 0.0;
    double upper = 0.0;
    double outgoing = 0.0;
  };

  std::string describe_pair(NodeId u, NodeId v, const std::vector<NodeId>* rank) const;

  mutable std::mutex mu_;
  std::vector<std::vector<Entry>> per_node_;
  std::vector<ScopeTotals> scope_totals_;
  std::uint64_t total_charges_ = 0;
};

}  // namespace ledp
