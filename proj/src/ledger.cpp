#include "ledp/ledger.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace ledp {

void BudgetLedger::charge(NodeId v, std::string_view label, double eps, ChargeScope scope) {
  if (!(eps > 0)) throw std::invalid_argument("ledger charge requires eps > 0");
  std::lock_guard<std::mutex> lock(mu_);
  auto& entries = per_node_.at(v);
  auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& e) {
    return e.scope == scope && e.label == label;
  });
  if (it == entries.end()) {
    entries.push_back(Entry{std::string(label), scope, eps, 1});
  } else {
    it->eps_total += eps;
    ++it->count;
  }
  auto& t = scope_totals_[v];
  switch (scope) {
    case ChargeScope::kFullList: t.full += eps; break;
    case ChargeScope::kUpperTriangle: t.upper += eps; break;
    case ChargeScope::kOutgoing: t.outgoing += eps; break;
  }
  ++total_charges_;
}

std::uint64_t BudgetLedger::total_charges() const {
  std::lock_guard<std::mutex> lock(mu_);
  return total_charges_;
}

BudgetLedger::WorstEdge BudgetLedger::worst_edge(const std::vector<NodeId>* rank,
                                                 NodeId exact_pair_limit) const {
  std::lock_guard<std::mutex> lock(mu_);
  const NodeId n = static_cast<NodeId>(per_node_.size());
  WorstEdge worst;
  if (n < 2) return worst;

  bool have_outgoing = false;
  for (const auto& t : scope_totals_) {
    if (t.outgoing > 0) have_outgoing = true;
  }
  if (have_outgoing && rank == nullptr) {
    throw std::logic_error(
        "ledger audit needs the published ordering to attribute outgoing-scoped charges");
  }

  if (n <= exact_pair_limit) {
    for (NodeId u = 0; u + 1 < n; ++u) {
      const auto& tu = scope_totals_[u];
      for (NodeId v = u + 1; v < n; ++v) {
        const auto& tv = scope_totals_[v];
        // The pair {u, v} (u < v) lies in u's upper-triangle row only, and in
        // the outgoing list of whichever endpoint the ordering places first.
        double total = tu.full + tv.full + tu.upper;
        if (have_outgoing) {
          total += (*rank)[u] < (*rank)[v] ? tu.outgoing : tv.outgoing;
        }
        if (total > worst.total) worst = WorstEdge{total, u, v, true};
      }
    }
    return worst;
  }

  // Bound mode: full charges of the two largest nodes plus the largest
  // row/outgoing charges anywhere. Never below the exact maximum.
  double full1 = 0, full2 = 0, upper_max = 0, out_max = 0;
  NodeId full1_v = 0, full2_v = 1;
  for (NodeId v = 0; v < n; ++v) {
    const auto& t = scope_totals_[v];
    if (t.full >= full1) {
      full2 = full1;
      full2_v = full1_v;
      full1 = t.full;
      full1_v = v;
    } else if (t.full > full2) {
      full2 = t.full;
      full2_v = v;
    }
    upper_max = std::max(upper_max, t.upper);
    out_max = std::max(out_max, t.outgoing);
  }
  return WorstEdge{full1 + full2 + upper_max + out_max, full1_v, full2_v, false};
}

std::string BudgetLedger::describe_pair(NodeId u, NodeId v,
                                        const std::vector<NodeId>* rank) const {
  std::ostringstream os;
  auto scope_relevant = [&](NodeId holder, ChargeScope scope) {
    switch (scope) {
      case ChargeScope::kFullList: return true;
      case ChargeScope::kUpperTriangle: return holder == std::min(u, v);
      case ChargeScope::kOutgoing:
        return rank != nullptr && ((*rank)[holder] < (*rank)[holder == u ? v : u]);
    }
    return false;
  };
  for (NodeId w : {u, v}) {
    os << " node " << w << ": [";
    bool first = true;
    for (const auto& e : per_node_[w]) {
      if (!scope_relevant(w, e.scope)) continue;
      if (!first) os << ", ";
      first = false;
      os << e.label << " x" << e.count << " = " << e.eps_total;
    }
    os << "]";
  }
  return os.str();
}

double BudgetLedger::assert_within(double eps_total, const std::vector<NodeId>* rank,
                                   double rel_tol) const {
  WorstEdge worst = worst_edge(rank);
  if (worst.total > eps_total * (1.0 + rel_tol)) {
    std::lock_guard<std::mutex> lock(mu_);
    std::ostringstream os;
    os << "privacy budget exceeded: pair {" << worst.u << ", " << worst.v
       << "} charged " << worst.total << " > " << eps_total << ";"
       << describe_pair(worst.u, worst.v, rank);
    throw LedgerViolation(os.str());
  }
  return worst.total;
}

void BudgetLedger::dump_json(std::ostream& out) const {
  std::lock_guard<std::mutex> lock(mu_);
  nlohmann::json j;
  j["nodes"] = per_node_.size();
  j["total_charges"] = total_charges_;
  auto scope_name = [](ChargeScope s) {
    switch (s) {
      case ChargeScope::kFullList: return "full";
      case ChargeScope::kUpperTriangle: return "upper";
      case ChargeScope::kOutgoing: return "outgoing";
    }
    return "?";
  };
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeId v = 0; v < per_node_.size(); ++v) {
    if (per_node_[v].empty()) continue;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : per_node_[v]) {
      entries.push_back({{"label", e.label},
                         {"scope", scope_name(e.scope)},
                         {"eps", e.eps_total},
                         {"count", e.count}});
    }
    nodes.push_back({{"node", v}, {"charges", std::move(entries)}});
  }
  j["per_node"] = std::move(nodes);
  out << j.dump(2) << "\n";
}

}  // namespace ledp
