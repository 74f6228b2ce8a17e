#include "ledp/lds.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ledp {

LdsParams LdsParams::make(NodeId n, double eta) {
  if (!(eta > 0)) throw std::invalid_argument("eta must be positive");
  if (n < 2) throw std::invalid_argument("LDS needs at least two nodes");
  LdsParams p;
  p.n = n;
  p.eta = eta;
  p.phi = eta / 5.0;
  p.lambda = (5.0 - 2.0 * eta) * eta / ((eta + 5.0) * (eta + 5.0));
  const double log_n = std::ceil(p.log_base_phi(static_cast<double>(n)));
  p.levels_per_group =
      std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::ceil(log_n / 4.0)));
  return p;
}

std::vector<double> estimate_core_numbers(const std::vector<std::uint32_t>& levels,
                                          const LdsParams& params) {
  std::vector<double> est(levels.size());
  for (std::size_t v = 0; v < levels.size(); ++v) {
    const std::int64_t group =
        static_cast<std::int64_t>((levels[v] + 1) / params.levels_per_group) - 1;
    est[v] = (2.0 + params.lambda) *
             params.group_cut(static_cast<std::uint64_t>(std::max<std::int64_t>(group, 0)));
  }
  return est;
}

Ordering ordering_from_levels(const std::vector<std::uint32_t>& levels) {
  Ordering out;
  out.order.resize(levels.size());
  std::iota(out.order.begin(), out.order.end(), NodeId{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](NodeId a, NodeId b) { return levels[a] < levels[b]; });
  out.rank.resize(levels.size());
  for (NodeId i = 0; i < out.order.size(); ++i) out.rank[out.order[i]] = i;
  return out;
}

}  // namespace ledp
