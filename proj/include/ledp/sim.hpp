#pragma once

#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ledp/graph.hpp"
#include "ledp/ledger.hpp"

namespace ledp {

/// Logical communication accounting. Bit vectors are billed at 1 bit per
/// node, integers and doubles at 8 bytes, bit-packed matrices at their
/// packed size; a broadcast is billed once.
struct RoundStats {
  std::uint64_t rounds = 0;
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
};

class RunTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The view a worker task gets of the world: its own node range plus charged
/// access to the private adjacency lists it owns. This is the only route to
/// adjacency data inside a round; every call records exactly one
/// local-randomizer charge, and nodes outside the partition are rejected.
class WorkerScope {
 public:
  std::uint32_t worker() const { return worker_; }
  NodeId begin() const { return begin_; }
  NodeId end() const { return end_; }
  NodeId size() const { return end_ - begin_; }

  std::span<const NodeId> private_neighbors(NodeId v, std::string_view label,
                                            double eps, ChargeScope scope) {
    if (v < begin_ || v >= end_) {
      throw std::logic_error("worker " + std::to_string(worker_) +
                             " touched node " + std::to_string(v) +
                             " outside its partition");
    }
    ledger_->charge(v, label, eps, scope);
    return graph_->neighbors(v);
  }

  NodeId private_degree(NodeId v, std::string_view label, double eps,
                        ChargeScope scope) {
    return static_cast<NodeId>(private_neighbors(v, label, eps, scope).size());
  }

 private:
  friend class Cluster;
  WorkerScope(std::uint32_t worker, NodeId begin, NodeId end, const Graph* g,
              BudgetLedger* ledger)
      : worker_(worker), begin_(begin), end_(end), graph_(g), ledger_(ledger) {}

  std::uint32_t worker_;
  NodeId begin_;
  NodeId end_;
  const Graph* graph_;
  BudgetLedger* ledger_;
};

/// Coordinator-side handle on M simulated workers over one node partition.
/// Rounds are synchronous: run_round launches every worker concurrently,
/// waits for all of them (the barrier), and collects outputs in worker-index
/// order so results never depend on completion order.
class Cluster {
 public:
  using Deadline = std::optional<std::chrono::steady_clock::time_point>;

  Cluster(const Graph& g, Partition part, BudgetLedger& ledger, Deadline deadline = {})
      : graph_(&g), part_(part), ledger_(&ledger), deadline_(deadline) {}

  std::uint32_t workers() const { return part_.workers; }
  const Partition& partition() const { return part_; }
  const RoundStats& stats() const { return stats_; }

  /// Throws RunTimeout once the wall-clock deadline has passed.
  void check_deadline() const {
    if (deadline_ && std::chrono::steady_clock::now() > *deadline_) {
      throw RunTimeout("run exceeded its wall-clock limit");
    }
  }

  /// One synchronous round. `payload_bytes` gives the logical size of each
  /// worker's message for the stats. A worker exception aborts the run with
  /// the worker's identity attached.
  template <typename Out>
  std::vector<Out> run_round(const std::function<Out(WorkerScope&)>& task,
                             const std::function<std::uint64_t(const Out&)>& payload_bytes) {
    if (in_round_) throw std::logic_error("run_round while a round is active");
    check_deadline();
    in_round_ = true;
    const std::uint32_t m = part_.workers;
    std::vector<Out> outputs(m);
    std::vector<std::exception_ptr> errors(m);
    {
      std::vector<std::thread> threads;
      threads.reserve(m);
      for (std::uint32_t w = 0; w < m; ++w) {
        threads.emplace_back([&, w] {
          WorkerScope scope(w, part_.begin(w), part_.end(w), graph_, ledger_);
          try {
            outputs[w] = task(scope);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& t : threads) t.join();
    }
    in_round_ = false;
    for (std::uint32_t w = 0; w < m; ++w) {
      if (errors[w]) {
        try {
          std::rethrow_exception(errors[w]);
        } catch (const RunTimeout&) {
          throw;
        } catch (const std::exception& e) {
          throw std::runtime_error("worker " + std::to_string(w) +
                                   " failed: " + e.what());
        }
      }
    }
    ++stats_.rounds;
    stats_.messages += m;
    for (const auto& out : outputs) stats_.bytes += payload_bytes(out);
    return outputs;
  }

  /// Accounts one coordinator broadcast. Only legal between rounds.
  void publish(std::uint64_t payload_bytes) {
    if (in_round_) throw std::logic_error("publish during an active round");
    stats_.bytes += payload_bytes;
  }

 private:
  const Graph* graph_;
  Partition part_;
  BudgetLedger* ledger_;
  Deadline deadline_;
  RoundStats stats_;
  bool in_round_ = false;
};

inline std::uint64_t bit_vector_bytes(std::uint64_t n) { return (n + 7) / 8; }

}  // namespace ledp
