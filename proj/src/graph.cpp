#include "ledp/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace ledp {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

}  // namespace

Graph Graph::build(std::vector<std::pair<std::uint64_t, std::uint64_t>> edges) {
  // Normalize to (min, max), drop self-loops, dedup.
  std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.empty()) fail("graph is empty after preprocessing");

  // Dense remap in ascending original-ID order; isolated nodes never appear.
  std::unordered_map<std::uint64_t, NodeId> remap;
  std::vector<std::uint64_t> orig;
  {
    std::vector<std::uint64_t> ids;
    ids.reserve(edges.size() * 2);
    for (const auto& [u, v] : edges) {
      ids.push_back(u);
      ids.push_back(v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    orig = ids;
    remap.reserve(ids.size());
    for (NodeId i = 0; i < ids.size(); ++i) remap.emplace(ids[i], i);
  }

  Graph g;
  g.orig_ids_ = std::move(orig);
  const NodeId n = static_cast<NodeId>(g.orig_ids_.size());
  std::vector<std::uint64_t> deg(n, 0);
  for (const auto& [u, v] : edges) {
    ++deg[remap.at(u)];
    ++deg[remap.at(v)];
  }
  g.offsets_.assign(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.adj_.resize(g.offsets_[n]);
  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [ou, ov] : edges) {
    NodeId u = remap.at(ou), v = remap.at(ov);
    g.adj_[cursor[u]++] = v;
    g.adj_[cursor[v]++] = u;
  }
  for (NodeId v = 0; v < n; ++v) {
    auto nb = std::span<NodeId>{g.adj_.data() + g.offsets_[v],
                                g.adj_.data() + g.offsets_[v + 1]};
    std::sort(nb.begin(), nb.end());
    g.max_degree_ = std::max(g.max_degree_, static_cast<NodeId>(nb.size()));
  }
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open edge list: " + path.string());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p != end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end || *p == '#' || *p == '%') continue;
    std::uint64_t vals[2];
    for (int k = 0; k < 2; ++k) {
      while (p != end && (*p == ' ' || *p == '\t')) ++p;
      auto [next, ec] = std::from_chars(p, end, vals[k]);
      if (ec != std::errc{} || next == p) {
        fail(path.string() + ":" + std::to_string(lineno) + ": malformed edge line");
      }
      p = next;
    }
    while (p != end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p != end) {
      fail(path.string() + ":" + std::to_string(lineno) + ": trailing tokens on edge line");
    }
    edges.emplace_back(vals[0], vals[1]);
  }
  if (in.bad()) fail("I/O error while reading " + path.string());
  if (edges.empty()) fail("graph is empty after preprocessing: " + path.string());
  return Graph::build(std::move(edges));
}

namespace {

constexpr char kCacheMagic[8] = {'L', 'E', 'D', 'P', 'G', 'R', 'P', 'H'};
constexpr std::uint64_t kCacheVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "binary cache assumes a little-endian host");

void write_u64(std::ofstream& out, std::uint64_t x) {
  out.write(reinterpret_cast<const char*>(&x), sizeof(x));
}

std::uint64_t read_u64(std::ifstream& in) {
  std::uint64_t x = 0;
  in.read(reinterpret_cast<char*>(&x), sizeof(x));
  return x;
}

}  // namespace

void save_binary_cache(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open cache for writing: " + path.string());
  out.write(kCacheMagic, sizeof(kCacheMagic));
  write_u64(out, kCacheVersion);
  const NodeId n = g.num_nodes();
  write_u64(out, n);
  write_u64(out, g.num_edges());
  std::uint64_t off = 0;
  write_u64(out, off);
  for (NodeId v = 0; v < n; ++v) {
    off += g.degree(v);
    write_u64(out, off);
  }
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : g.neighbors(v)) write_u64(out, u);
  }
  for (NodeId v = 0; v < n; ++v) write_u64(out, g.original_id(v));
  if (!out) fail("I/O error while writing " + path.string());
}

Graph load_binary_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open cache: " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) {
    fail("not a graph cache file: " + path.string());
  }
  if (read_u64(in) != kCacheVersion) fail("unsupported cache version: " + path.string());
  const std::uint64_t n = read_u64(in);
  const std::uint64_t m = read_u64(in);
  std::vector<std::uint64_t> offsets(n + 1);
  for (auto& o : offsets) o = read_u64(in);
  if (offsets[n] != 2 * m) fail("corrupt cache (offsets/m mismatch): " + path.string());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  edges.reserve(m);
  std::vector<std::uint64_t> adj(2 * m);
  for (auto& a : adj) a = read_u64(in);
  std::vector<std::uint64_t> orig(n);
  for (auto& o : orig) o = read_u64(in);
  if (!in) fail("I/O error or truncated cache: " + path.string());
  for (std::uint64_t v = 0; v < n; ++v) {
    for (std::uint64_t i = offsets[v]; i < offsets[v + 1]; ++i) {
      std::uint64_t u = adj[i];
      if (u > v) edges.emplace_back(orig[v], orig[u]);
    }
  }
  return Graph::build(std::move(edges));
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open graph file: " + path.string());
  char magic[8] = {};
  in.read(magic, sizeof(magic));
  in.close();
  if (std::memcmp(magic, kCacheMagic, sizeof(kCacheMagic)) == 0) {
    return load_binary_cache(path);
  }
  return load_edge_list(path);
}

CoreLabeling exact_core_numbers(const Graph& g) {
  const NodeId n = g.num_nodes();
  // Bucket peeling: repeatedly remove a node of minimum induced degree.
  std::vector<NodeId> deg(n);
  NodeId max_deg = 0;
  for (NodeId v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
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
  CoreLabeling out;
  out.core.assign(n, 0);
  NodeId current = 0;
  for (NodeId i = 0; i < n; ++i) {
    NodeId v = order[i];
    current = std::max(current, deg[v]);
    out.core[v] = current;
    for (NodeId u : g.neighbors(v)) {
      if (deg[u] > deg[v]) {
        // Swap u to the front of its bucket, then shrink its degree.
        NodeId du = deg[u];
        NodeId head = bucket_start[du];
        NodeId w = order[head];
        if (w != u) {
          std::swap(order[pos[u]], order[head]);
          std::swap(pos[u], pos[w]);
        }
        ++bucket_start[du];
        --deg[u];
      }
    }
  }
  out.degeneracy = current;
  return out;
}

std::uint64_t exact_triangle_count(const Graph& g) {
  const NodeId n = g.num_nodes();
  // Orient edges by (core, degree, id) and merge-count common out-neighbors.
  CoreLabeling cores = exact_core_numbers(g);
  std::vector<NodeId> rank(n);
  {
    std::vector<NodeId> order(n);
    for (NodeId v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
      if (cores.core[a] != cores.core[b]) return cores.core[a] < cores.core[b];
      if (g.degree(a) != g.degree(b)) return g.degree(a) < g.degree(b);
      return a < b;
    });
    for (NodeId i = 0; i < n; ++i) rank[order[i]] = i;
  }
  std::vector<std::vector<NodeId>> out(n);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : g.neighbors(v)) {
      if (rank[u] > rank[v]) out[v].push_back(u);
    }
  }
  std::uint64_t total = 0;
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : out[v]) {
      const auto& a = out[v];
      const auto& b = out[u];
      std::size_t i = 0, j = 0;
      while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
          ++i;
        } else if (a[i] > b[j]) {
          ++j;
        } else {
          ++total;
          ++i;
          ++j;
        }
      }
    }
  }
  return total;
}

Partition make_partition(NodeId n, std::uint32_t workers) {
  if (workers < 1 || workers > n) {
    throw std::invalid_argument("worker count must be in [1, n]; got M=" +
                                std::to_string(workers) + " for n=" + std::to_string(n));
  }
  return Partition{n, workers};
}

}  // namespace ledp
