#include "ledp/lds.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace ledp;
namespace tu = ledp::testutil;

TEST_CASE("group index floors by levels per group") {
  LdsParams p;
  p.levels_per_group = 5;
  CHECK(p.group_index(12) == 2);
  CHECK(p.group_index(0) == 0);
  p.levels_per_group = 3;
  CHECK(p.group_index(3) == 1);
}

TEST_CASE("group cuts are powers of 1+phi") {
  LdsParams p;
  p.phi = 0.725;
  CHECK(p.group_cut(0) == doctest::Approx(1.0));
  CHECK(p.group_cut(2) == doctest::Approx(2.975625));
  p.phi = 0.5;
  CHECK(p.group_cut(3) == doctest::Approx(3.375));
}

TEST_CASE("parameter derivation from eta") {
  // Defaults: 2 + eta = 5.625.
  auto p = LdsParams::make(986, 3.625);
  CHECK(p.phi == doctest::Approx(0.725));
  CHECK(p.lambda ==
        doctest::Approx((5.0 - 2.0 * 3.625) * 3.625 / ((3.625 + 5.0) * (3.625 + 5.0))));
  CHECK(p.lambda < 0);  // negative at the experimental parameterization
  // ceil(log_1.725(986)) = 13, L = ceil(13/4) = 4.
  CHECK(p.levels_per_group == 4);
  auto tiny = LdsParams::make(3, 3.625);
  CHECK(tiny.levels_per_group == 1);
  CHECK_THROWS_AS(LdsParams::make(10, 0.0), std::invalid_argument);
}

TEST_CASE("estimate geometry identity (2+lambda)(1+phi)^2 == 2+eta") {
  for (double eta : {0.5, 1.0, 2.0, 3.625}) {
    auto p = LdsParams::make(100, eta);
    CHECK((2.0 + p.lambda) * (1.0 + p.phi) * (1.0 + p.phi) == doctest::Approx(2.0 + eta));
  }
}

TEST_CASE("core estimates from levels") {
  LdsParams p;
  p.eta = 1.0;
  p.phi = 0.2;
  p.lambda = 1.0 / 12.0;
  p.levels_per_group = 4;
  p.n = 3;
  SUBCASE("level zero gives 2+lambda for any L") {
    CHECK(estimate_core_numbers({0}, p)[0] == doctest::Approx(2.0 + 1.0 / 12.0));
  }
  SUBCASE("worked example") {
    // floor((11+1)/4) - 1 = 2: (2 + 1/12) * 1.2^2 = 3.0
    CHECK(estimate_core_numbers({11}, p)[0] == doctest::Approx(3.0));
  }
  SUBCASE("monotone in level") {
    std::vector<std::uint32_t> levels(40);
    for (std::uint32_t i = 0; i < 40; ++i) levels[i] = i;
    auto est = estimate_core_numbers(levels, p);
    for (std::size_t i = 1; i < est.size(); ++i) CHECK(est[i] >= est[i - 1]);
  }
}

TEST_CASE("ordering sorts by level then id") {
  auto ord = ordering_from_levels({2, 0, 0});
  CHECK(ord.order == std::vector<NodeId>{1, 2, 0});
  CHECK(ord.rank[0] == 2);
  CHECK(ord.rank[1] == 0);
  CHECK(ord.rank[2] == 1);

  auto flat = ordering_from_levels({1, 1, 1, 1});
  CHECK(flat.order == std::vector<NodeId>{0, 1, 2, 3});
}

TEST_CASE("orientation by rank covers each edge exactly once") {
  std::mt19937_64 rng(5);
  Graph g = tu::random_graph(25, 0.25, rng);
  std::vector<std::uint32_t> levels(g.num_nodes());
  for (auto& l : levels) l = static_cast<std::uint32_t>(rng() % 4);
  auto ord = ordering_from_levels(levels);
  std::uint64_t out_sum = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    for (NodeId u : g.neighbors(v)) {
      if (ord.rank[u] > ord.rank[v]) ++out_sum;
    }
  }
  CHECK(out_sum == g.num_edges());
}
