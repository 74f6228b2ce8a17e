#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ledp {

using NodeId = std::uint32_t;

/// Immutable undirected graph in compressed adjacency (CSR) form.
///
/// Invariants established by build(): no self-loops, no duplicate edges,
/// no zero-degree nodes, every adjacency list sorted ascending, and the
/// adjacency relation is symmetric. Node IDs are dense in [0, n); the
/// mapping back to the input IDs is kept for reporting.
class Graph {
 public:
  Graph() = default;

  /// Preprocesses an arbitrary edge list: drops self-loops and duplicates
  /// (including (v,u) mirrors of (u,v)), removes nodes that end up with no
  /// edges, and remaps the survivors to dense IDs in ascending original-ID
  /// order.
  ///
  /// Throws std::runtime_error if no edge survives preprocessing.
  static Graph build(std::vector<std::pair<std::uint64_t, std::uint64_t>> edges);

  NodeId num_nodes() const { return static_cast<NodeId>(offsets_.size() - 1); }
  std::uint64_t num_edges() const { return adj_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  NodeId degree(NodeId v) const {
    return static_cast<NodeId>(offsets_[v + 1] - offsets_[v]);
  }
  NodeId max_degree() const { return max_degree_; }

  bool has_edge(NodeId u, NodeId v) const;

  /// Original input ID of a remapped node.
  std::uint64_t original_id(NodeId v) const { return orig_ids_[v]; }
  const std::vector<std::uint64_t>& original_ids() const { return orig_ids_; }

  /// Calls fn(u, v) once per undirected edge with u < v.
  template <typename Fn>
  void for_each_edge(Fn&& fn) const {
    for (NodeId u = 0; u < num_nodes(); ++u) {
      for (NodeId v : neighbors(u)) {
        if (v > u) fn(u, v);
      }
    }
  }

  bool operator==(const Graph& other) const = default;

 private:
  std::vector<std::uint64_t> offsets_;  // n+1 entries
  std::vector<NodeId> adj_;             // 2m entries
  std::vector<std::uint64_t> orig_ids_;
  NodeId max_degree_ = 0;
};

/// Parses a whitespace-separated edge-list text file. Lines starting with
/// '#' or '%' are comments. Each data line must hold exactly two integer
/// tokens; violations are reported with their line number.
Graph load_edge_list(const std::filesystem::path& path);

/// Binary cache of the compressed graph. Versioned little-endian layout:
/// magic, version, n, m, offsets, neighbor array, original IDs, all 64-bit.
void save_binary_cache(const Graph& g, const std::filesystem::path& path);
Graph load_binary_cache(const std::filesystem::path& path);

/// Loads either format, sniffing the cache magic first.
Graph load_graph(const std::filesystem::path& path);

/// Exact core numbers; degeneracy equals the maximum core number.
struct CoreLabeling {
  std::vector<NodeId> core;
  NodeId degeneracy = 0;
};

/// Min-degree peeling, O(n + m).
CoreLabeling exact_core_numbers(const Graph& g);

/// Exact number of unordered triangles via degeneracy-ordered merge counting.
std::uint64_t exact_triangle_count(const Graph& g);

/// Contiguous node partition: workers 0..M-2 own floor(n/M) nodes each, the
/// last worker owns the remainder.
struct Partition {
  NodeId n = 0;
  std::uint32_t workers = 0;

  NodeId begin(std::uint32_t w) const {
    return static_cast<NodeId>(static_cast<std::uint64_t>(n / workers) * w);
  }
  NodeId end(std::uint32_t w) const {
    return w + 1 == workers ? n : begin(w + 1);
  }
  std::uint32_t worker_of(NodeId v) const {
    std::uint32_t w = static_cast<std::uint32_t>(v / (n / workers));
    return w >= workers ? workers - 1 : w;
  }
};

/// Throws std::runtime_error unless 1 <= workers <= n.
Partition make_partition(NodeId n, std::uint32_t workers);

}  // namespace ledp
