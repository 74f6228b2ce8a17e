#include "ledp/triangle.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "ledp/metrics.hpp"
#include "stats_util.hpp"
#include "test_util.hpp"

using namespace ledp;
namespace tu = ledp::testutil;

namespace {

TriangleResult run_on(const Graph& g, const TriangleConfig& cfg, std::uint64_t seed,
                      std::uint32_t workers, BudgetLedger* ledger_out = nullptr) {
  BudgetLedger local(g.num_nodes());
  BudgetLedger& ledger = ledger_out ? *ledger_out : local;
  Cluster cluster(g, make_partition(g.num_nodes(), workers), ledger);
  Mechanisms mech(seed, cfg.noiseless);
  return run_triangle(g, cluster, mech, cfg);
}

}  // namespace

TEST_CASE("dmax aggregation") {
  CHECK(dmax_aggregate({3, 5, 2}, 55, 1.0) == 54);  // ceil(5 + 12 ln 55)
  CHECK(dmax_aggregate({0}, 3, 1.0) == 14);         // ceil(12 ln 3)
  CHECK(dmax_aggregate({0}, 3, 2.0) == 7);          // doubling eps halves the slack
  CHECK(dmax_aggregate({-100}, 2, 100.0) == 1);     // floored at one
  CHECK_THROWS_AS(dmax_aggregate({}, 10, 1.0), std::invalid_argument);
}

TEST_CASE("noiseless pipeline on a path publishes the true max out-degree plus slack") {
  Graph g = tu::path_graph(3);
  TriangleConfig cfg;
  cfg.noiseless = true;
  auto res = run_on(g, cfg, 1, 1);
  CHECK(res.dmax == 15);  // ceil(1 + 12 ln 3)
  CHECK(res.delta == 0.0);
}

TEST_CASE("noiseless pipeline counts every fixture exactly") {
  TriangleConfig cfg;
  cfg.noiseless = true;
  CHECK(run_on(tu::triangle_graph(), cfg, 1, 1).delta == 1.0);
  CHECK(run_on(tu::cycle_graph(4), cfg, 1, 2).delta == 0.0);
  CHECK(run_on(tu::complete_graph(4), cfg, 1, 2).delta == 4.0);
  CHECK(run_on(tu::complete_graph(5), cfg, 1, 1).delta == 10.0);
  CHECK(run_on(tu::petersen_graph(), cfg, 1, 2).delta == 0.0);
  CHECK(run_on(tu::four_degenerate_fixture(), cfg, 1, 3).delta ==
        static_cast<double>(exact_triangle_count(tu::four_degenerate_fixture())));
  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    Graph g = tu::random_graph(10 + static_cast<NodeId>(rng() % 21), 0.3, rng);
    CHECK(run_on(g, cfg, 2, 2).delta == static_cast<double>(exact_triangle_count(g)));
  }
}

TEST_CASE("materialized and streaming response bits agree") {
  std::mt19937_64 rng(32);
  Graph g = tu::random_graph(24, 0.25, rng);
  TriangleConfig mat;
  TriangleConfig stream;
  stream.rr_streaming = true;
  auto a = run_on(g, mat, 77, 3);
  auto b = run_on(g, stream, 77, 3);
  CHECK(a.delta == b.delta);
  CHECK(a.dmax == b.dmax);

  Mechanisms mech(77, false);
  auto x = NoisyEdgeMatrix::streaming(g, mech, 0.25);
  for (NodeId j = 0; j < g.num_nodes(); ++j) {
    for (NodeId k = j + 1; k < g.num_nodes(); ++k) {
      CHECK(x.bit(j, k) == noisy_pair_bit(g, mech, 0.25, j, k));
    }
  }
}

TEST_CASE("noiseless response matrix equals the adjacency above the diagonal") {
  std::mt19937_64 rng(33);
  Graph g = tu::random_graph(16, 0.3, rng);
  Mechanisms mech(5, true);
  auto x = NoisyEdgeMatrix::streaming(g, mech, 0.25);
  for (NodeId j = 0; j < g.num_nodes(); ++j) {
    for (NodeId k = j + 1; k < g.num_nodes(); ++k) {
      CHECK(x.bit(j, k) == (g.has_edge(j, k) ? 1 : 0));
    }
  }
}

TEST_CASE("upper-triangular row domain") {
  // Node n-2 has exactly one pair column; the full matrix holds n(n-1)/2 bits.
  Graph g = tu::complete_graph(4);
  Mechanisms mech(9, true);
  auto x = NoisyEdgeMatrix::streaming(g, mech, 1.0);
  CHECK(x.logical_bits() == 6);
  CHECK(x.bit(2, 3) == 1);
  CHECK(x.packed_bytes() == 1);
}

TEST_CASE("truncation inspects only the leading window") {
  auto pairs = tu::truncated_query_pairs({2, 5, 7, 9, 11}, 3);
  CHECK(pairs.size() == 3);  // C(3,2)
  auto all = tu::truncated_query_pairs({2, 5, 7}, 10);
  CHECK(all.size() == 3);
}

TEST_CASE("estimator average flip rate on empty rows") {
  // All-zero row at eps/4 = 0.25: expected ones fraction 1/(e^0.25 + 1).
  Mechanisms mech(41, false);
  std::uint64_t ones = 0;
  const std::uint64_t n = 200000;
  for (std::uint64_t i = 0; i < n; ++i) {
    ones += mech.rr_flip(0.25, {NoiseTag::kTest, 9, 0, i});
  }
  CHECK(std::abs(ones / double(n) - 0.437823) < 0.004);
}

TEST_CASE("bit-exact results for any worker count") {
  Graph g = tu::synthetic_powerlaw(100, 3, 2, 7, 66);
  TriangleConfig cfg;
  auto base = run_on(g, cfg, 13, 1);
  for (std::uint32_t m : {4u, 9u, 100u}) {
    auto res = run_on(g, cfg, 13, m);
    CHECK(res.delta == base.delta);  // bit-exact
    CHECK(res.dmax == base.dmax);
  }
}

TEST_CASE("delta equals the merged worker partials") {
  Graph g = tu::complete_graph(12);
  TriangleConfig cfg;
  BudgetLedger ledger(g.num_nodes());
  auto res = run_on(g, cfg, 17, 4, &ledger);
  double merged = 0.0;
  for (double p : res.worker_partials) merged += p;
  CHECK(merged == doctest::Approx(res.delta).epsilon(1e-12));
  auto single = run_on(g, cfg, 17, 1);
  CHECK(single.worker_partials.size() == 1);
  CHECK(single.worker_partials[0] == single.delta);
}

TEST_CASE("pipeline stays within the privacy budget") {
  std::mt19937_64 rng(34);
  Graph g = tu::random_graph(30, 0.25, rng);
  for (double eps : {0.25, 0.5, 1.0}) {
    TriangleConfig cfg;
    cfg.eps = eps;
    BudgetLedger ledger(g.num_nodes());
    auto res = run_on(g, cfg, 19, 3, &ledger);
    CHECK(ledger.assert_within(eps, &res.ordering_stage.ordering.rank) <=
          eps * (1 + 1e-9));
  }
}

TEST_CASE("monte-carlo mean tracks the true count on K4") {
  Graph g = tu::complete_graph(4);
  TriangleConfig cfg;
  std::vector<double> deltas;
  for (std::uint64_t run = 0; run < 2000; ++run) {
    deltas.push_back(run_on(g, cfg, 1000 + run, 1).delta);
  }
  const auto [mean, se] = tu::mean_and_stderr(deltas);
  CHECK(std::abs(mean - 4.0) <= 3.0 * se);
}

TEST_CASE("noiseless orientation keeps out-degrees near the degeneracy") {
  // Under the ordering from a noiseless run, every out-degree stays within
  // (2+eta) times the degeneracy.
  auto check = [](const Graph& g) {
    BudgetLedger ledger(g.num_nodes());
    Cluster cluster(g, make_partition(g.num_nodes(), 2), ledger);
    Mechanisms mech(1, true);
    KcoreConfig cfg;
    cfg.noiseless = true;
    auto res = run_kcore(cluster, mech, cfg);
    const auto d = exact_core_numbers(g).degeneracy;
    std::uint64_t max_out = 0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      std::uint64_t out = 0;
      for (NodeId j : g.neighbors(v)) {
        if (res.ordering.rank[j] > res.ordering.rank[v]) ++out;
      }
      max_out = std::max(max_out, out);
    }
    CHECK(static_cast<double>(max_out) <= 5.625 * d + 1e-9);
  };
  check(tu::complete_graph(20));
  check(tu::four_degenerate_fixture());
  check(tu::petersen_graph());
  std::mt19937_64 rng(35);
  for (int t = 0; t < 10; ++t) check(tu::random_graph(60, 0.15, rng));
}

TEST_CASE("estimate variance shrinks as eps grows") {
  Graph g = tu::complete_graph(5);
  auto variance_at = [&](double eps) {
    std::vector<double> deltas;
    for (std::uint64_t r = 0; r < 300; ++r) {
      TriangleConfig cfg;
      cfg.eps = eps;
      deltas.push_back(run_on(g, cfg, 4000 + r, 1).delta);
    }
    const auto [mean, se] = tu::mean_and_stderr(deltas);
    (void)mean;
    return se * se * 300.0;
  };
  const double lo = variance_at(0.5);
  const double hi = variance_at(2.0);
  CHECK(std::isfinite(lo));
  CHECK(lo > hi);
}

TEST_CASE("materialization guard demands streaming") {
  Graph g = tu::complete_graph(10);
  TriangleConfig cfg;
  cfg.max_materialized_nodes = 5;
  CHECK_THROWS_WITH_AS(static_cast<void>(run_on(g, cfg, 1, 1)),
                       doctest::Contains("streaming"), std::runtime_error);
  cfg.rr_streaming = true;
  CHECK_NOTHROW(static_cast<void>(run_on(g, cfg, 1, 1)));
}
