#include <catch_amalgamated.hpp>

#include "oscilab/generators.hpp"
#include "oscilab/packing.hpp"

using namespace oscilab;
using Catch::Approx;

TEST_CASE("packing enumeration counts") {
  CHECK(count_packings({1, 1}) == 1);
  const auto two = enumerate_packings({1, 2});
  REQUIRE(two.size() == 4);
  // a(N) counts packings including the empty one.
  std::vector<std::size_t> a{1};
  for (int n = 1; n <= max_enumeration_res_1d; ++n) {
    std::size_t v = a[n - 1];
    for (int k = 1; k <= n; ++k) v += a[n - k];
    a.push_back(v);
    CHECK(count_packings({1, n}) == v - 1);
  }
  CHECK(count_packings({2, 2}) == 16);  // 15 nonempty sets of unit cells, plus the square
  for (const Packing& p : enumerate_packings({2, 3})) CHECK(p.is_disjoint({2, 3}));
  CHECK_THROWS_AS(count_packings({1, max_enumeration_res_1d + 1}), ConfigError);
  CHECK_THROWS_AS(count_packings({2, max_enumeration_res_2d + 1}), ConfigError);
}

TEST_CASE("max measure packing") {
  const GridShape g{1, 8};
  const std::vector<Cube> overlapping{Cube{{0, 0}, 2}, Cube{{1, 0}, 3}};
  const auto r = max_measure_packing(overlapping, g);
  REQUIRE(r.packing.cubes.size() == 1);
  CHECK(r.packing.cubes[0].side == 3);
  const std::vector<Cube> disjoint{Cube{{0, 0}, 2}, Cube{{3, 0}, 1}, Cube{{5, 0}, 3}};
  CHECK(max_measure_packing(disjoint, g).packing.cubes.size() == 3);

  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 11;
    const GridShape gg{1, n};
    std::vector<Cube> cand;
    for (const Cube& q : enumerate_cubes(gg))
      if (rng.uniform() < 0.25) cand.push_back(q);
    double brute = 0;
    if (!cand.empty())
      for_each_packing(gg, cand, [&](std::span<const Cube> p) {
        double m = 0;
        for (const Cube& q : p) m += measure(q, gg);
        brute = std::max(brute, m);
      });
    const auto dp = max_measure_packing(cand, gg);
    CHECK(dp.exact);
    CHECK(dp.measure == Approx(brute).margin(1e-15));
    CHECK(dp.packing.is_disjoint(gg));
  }
}

TEST_CASE("max additive packing") {
  const GridShape g{1, 6};
  const Cube only{{2, 0}, 3};
  const auto single = max_additive_packing(g, [&](const Cube& q) { return q == only ? 2.0 : -1.0; });
  REQUIRE(single.packing.cubes.size() == 1);
  CHECK(single.packing.cubes[0] == only);
  const auto none = max_additive_packing(g, [](const Cube&) { return -0.5; });
  CHECK(none.packing.cubes.empty());
  CHECK(none.value == 0.0);

  Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const GridShape gg = trial % 4 == 3 ? GridShape{2, 1 + trial % 4} : GridShape{1, 1 + trial % 12};
    std::map<std::pair<std::array<int, 2>, int>, double> w;
    for (const Cube& q : enumerate_cubes(gg)) w[{q.origin, q.side}] = rng.normal();
    auto weight = [&](const Cube& q) { return w.at({q.origin, q.side}); };
    double brute = 0;
    std::vector<double> by_measure(gg.cells() + 1, -std::numeric_limits<double>::infinity());
    by_measure[0] = 0;
    for_each_packing(gg, [&](std::span<const Cube> p) {
      double v = 0;
      std::size_t cells = 0;
      for (const Cube& q : p) {
        v += weight(q);
        cells += q.cell_count(gg.dim);
      }
      brute = std::max(brute, v);
      by_measure[cells] = std::max(by_measure[cells], v);
    });
    const auto r = max_additive_packing(gg, weight);
    CHECK(r.value == Approx(brute).margin(1e-12));
    const auto b = max_additive_packing(gg, weight, int(gg.cells()));
    REQUIRE(b.profile.size() == gg.cells() + 1);
    for (std::size_t m = 0; m <= gg.cells(); ++m) {
      if (std::isinf(by_measure[m]))
        CHECK(std::isinf(b.profile[m]));
      else
        CHECK(b.profile[m] == Approx(by_measure[m]).margin(1e-12));
    }
  }
}

TEST_CASE("Vitali selection") {
  const GridShape g{1, 16};
  const std::vector<Cube> disjoint{Cube{{0, 0}, 2}, Cube{{4, 0}, 3}, Cube{{9, 0}, 1}};
  CHECK(vitali_select(disjoint, g).cubes.size() == 3);
  const std::vector<Cube> chain{Cube{{3, 0}, 1}, Cube{{2, 0}, 3}, Cube{{0, 0}, 8}};
  const Packing sel = vitali_select(chain, g);
  REQUIRE(sel.cubes.size() == 1);
  CHECK(sel.cubes[0].side == 8);

  Rng rng(5);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const GridShape gg{1 + trial % 2, trial % 2 ? 12 : 40};
    std::vector<Cube> cand;
    for (const Cube& q : enumerate_cubes(gg))
      if (rng.uniform() < 0.05) cand.push_back(q);
    if (cand.empty()) continue;
    const Packing p = vitali_select(cand, gg);
    CHECK(p.is_disjoint(gg));
    const double factor = vitali_coverage_factor(cand, p, gg);
    CHECK(factor <= std::pow(5.0, gg.dim));
    worst = std::max(worst, factor);
  }
  INFO("largest observed coverage factor " << worst);
  CHECK(worst >= 1.0);
}
