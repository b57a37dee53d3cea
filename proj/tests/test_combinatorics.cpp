#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "sigma/combinatorics.hpp"

using namespace sigma;

namespace {

SetFamily family(const std::vector<Point>& sets) {
  SetFamily f;
  for (std::size_t i = 0; i < sets.size(); ++i) f.members.emplace_back(static_cast<Label>(i + 1), sets[i]);
  return f;
}

// n distinct s-subsets of {0..ground-1}
std::vector<Point> distinct_sets(std::mt19937_64& rng, std::size_t n, std::uint32_t s, std::uint32_t ground) {
  std::set<Point> out;
  std::uniform_int_distribution<Element> pick(0, ground - 1);
  while (out.size() < n) {
    std::set<Element> e;
    while (e.size() < s) e.insert(pick(rng));
    out.insert(Point(std::vector<Element>(e.begin(), e.end())));
  }
  std::vector<Point> v(out.begin(), out.end());
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

NeighborhoodSpec empty_spec(std::size_t labels, std::uint32_t k) {
  NeighborhoodSpec spec;
  for (Label l = 0; l < labels; ++l) {
    spec.G[l] = std::vector<Point>(k + 1);
    spec.H[l] = std::vector<Point>(k + 1);
  }
  return spec;
}

}  // namespace

TEST_CASE("delta-system examples") {
  auto a = extract_delta_system(family({{1, 2}, {1, 3}, {1, 4}}), 3);
  CHECK(a.found);
  CHECK(a.best.root == Point{1});
  CHECK(a.best.petal_labels.size() == 3);
  auto b = extract_delta_system(family({{1, 2}, {3, 4}, {5, 6}}), 3);
  CHECK(b.found);
  CHECK(b.best.root.empty());
  auto c = extract_delta_system(family({{1, 2}, {1, 3}, {2, 3}}), 3);
  CHECK_FALSE(c.found);
  CHECK(c.max_petals == 2);
  CHECK_THROWS_AS(extract_delta_system(family({{1}}), 1), PreconditionError);
  CHECK(erdos_rado_bound(2, 3) == 8);
  CHECK(erdos_rado_bound(3, 4) == 162);
}

TEST_CASE("set family text") {
  auto f = SetFamily::parse("# sets\n1: {1,2}\n\n7: {}\n");
  REQUIRE(f.members.size() == 2);
  CHECK(f.at(7).empty());
  CHECK(SetFamily::parse(f.to_string()).members == f.members);
  CHECK_THROWS_AS(SetFamily::parse("1: {1}\n1: {2}"), PreconditionError);
  CHECK_THROWS_AS(SetFamily::parse("1 {1}"), PreconditionError);
  CHECK_THROWS_AS(f.at(3), PreconditionError);
}

TEST_CASE("property: exact extraction matches brute force on small families") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  for (int trial = 0; trial < 400; ++trial) {
    const auto n = size(rng);
    std::vector<Point> sets;
    for (std::size_t i = 0; i < n; ++i) sets.push_back(oracle::random_point(rng, 7, 3));
    const auto fam = family(sets);
    for (bool uniform : {true, false}) {
      const auto s = extract_delta_system(fam, 2, uniform);
      CHECK(s.exact);
      CHECK(s.max_petals == oracle::brute_sunflower(sets, uniform));
      CHECK(s.best.petal_labels.size() == s.max_petals);
      Point root;
      CHECK(is_delta_system(fam, s.best.petal_labels, uniform, &root));
      if (s.max_petals >= 2) CHECK(root == s.best.root);
    }
  }
}

TEST_CASE("property: more than s!(p-1)^s distinct s-sets always hold p petals") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint32_t s = 1 + trial % 3;
    const std::uint32_t p = 2 + (trial / 3) % 3;
    const auto bound = erdos_rado_bound(s, p);
    const auto sets = distinct_sets(rng, bound + 1 + trial % 4, s, s == 1 ? 200 : 14);
    const auto fam = family(sets);
    const auto res = extract_delta_system(fam, p);
    CHECK(res.found);
    CHECK(is_delta_system(fam, res.best.petal_labels, true));
    CHECK(res.best.petal_size == std::optional<std::size_t>(s));
  }
}

TEST_CASE("transversal examples") {
  std::map<Label, Point> empty;
  for (Label l = 1; l <= 5; ++l) empty[l] = Point{};
  auto a = free_transversal(empty, 3, Point{});
  CHECK(a.ok);
  CHECK(a.labels == std::vector<Label>{1, 2, 3});

  std::map<Label, Point> chain;
  for (Label l = 1; l <= 10; ++l) chain[l] = Point{l + 1};
  auto b = free_transversal(chain, 3, Point{});
  CHECK(b.ok);
  CHECK(b.labels == std::vector<Label>{1, 3, 5});

  std::map<Label, Point> two{{1, {}}, {2, {}}};
  auto c = free_transversal(two, 3, Point{});
  CHECK_FALSE(c.ok);
  CHECK(c.blocked_at == 2);

  auto d = free_transversal(empty, 2, Point{1, 2});
  CHECK(d.labels == std::vector<Label>{3, 4});
}

TEST_CASE("property: transversals satisfy both freeness clauses") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    std::map<Label, Point> G;
    for (Label l = 0; l < 12; ++l) G[l] = oracle::random_point(rng, 14, 3);
    const auto res = free_transversal(G, 6, Point{});
    const auto& L = res.labels;
    for (std::size_t p = 0; p < L.size(); ++p)
      for (std::size_t q = 0; q < p; ++q) {
        CHECK_FALSE(G[L[q]].contains(L[p]));
        CHECK_FALSE(G[L[p]].contains(L[q]));
      }
    CHECK(res.ok == (L.size() == 6));
  }
}

TEST_CASE("common point witness examples") {
  auto all = common_point_witness(empty_spec(5, 1), 1, 1);
  CHECK(all.ok);
  CHECK(all.lambda0 == 0);
  CHECK(all.S == all.M);
  CHECK(all.subsets_checked == 10);

  auto spec = empty_spec(10, 1);
  for (Label mu = 0; mu < 10; ++mu) spec.H[mu][1] = Point{mu + 1};
  auto chain = common_point_witness(spec, 1, 1);
  CHECK(chain.ok);
  for (std::size_t p = 1; p < chain.M.size(); ++p) CHECK(chain.M[p] != chain.M[p - 1] + 1);

  auto small = common_point_witness(empty_spec(2, 1), 2, 1);
  CHECK_FALSE(small.ok);
  CHECK(small.failed_stage.rfind("M:", 0) == 0);

  auto parsed = NeighborhoodSpec::parse("0: G={},{} H={},{}\n1: G={},{} H={},{}\n");
  CHECK(parsed.G.size() == 2);
  auto bad = empty_spec(3, 1);
  bad.G[1][0] = Point{1};
  CHECK_THROWS_AS(bad.validate(1), PreconditionError);
  CHECK_THROWS_AS(empty_spec(3, 2).validate(1), PreconditionError);
}

TEST_CASE("property: witnesses are confirmed by direct inspection") {
  std::mt19937_64 rng(44);
  int successes = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t n = 1 + trial % 3, k = 1 + trial % 2;
    NeighborhoodSpec spec;
    for (Label l = 0; l < 24; ++l) {
      for (std::uint32_t j = 0; j <= k; ++j) {
        auto g = oracle::random_point(rng, 40, 1);
        auto h = oracle::random_point(rng, 40, 1);
        if (j == 0) g = g.minus(Point{l});
        if (j == 1) h = h.minus(Point{l});
        spec.G[l].push_back(g);
        spec.H[l].push_back(h);
      }
    }
    const auto w = common_point_witness(spec, n, k, trial % 2 ? Exec::parallel : Exec::serial);
    CHECK(w.failed_stage != "checker");
    if (!w.ok) continue;
    ++successes;
    CHECK(w.S.size() >= n + 1);
    // the explicit point ({lambda0}, F, {}, ...) avoids every I_j
    for (std::uint32_t mask = 0; mask < (1U << w.S.size()); ++mask) {
      if (static_cast<std::uint32_t>(__builtin_popcount(mask)) != n + 1) continue;
      std::vector<Label> F;
      for (std::size_t i = 0; i < w.S.size(); ++i)
        if ((mask >> i) & 1U) F.push_back(w.S[i]);
      Point I0 = spec.G[w.lambda0][0], I1 = spec.G[w.lambda0][1];
      for (auto mu : F) {
        I0 = I0.unite(spec.H[mu][0]);
        I1 = I1.unite(spec.H[mu][1]);
      }
      CHECK_FALSE(I0.contains(w.lambda0));
      CHECK(Point(std::vector<Element>(F.begin(), F.end())).disjoint(I1));
    }
  }
  CHECK(successes > 50);
}

TEST_CASE("emptiness bound examples") {
  std::map<Label, Point> singles{{1, {10}}, {2, {11}}};
  auto a = neighborhood_emptiness_bound(singles, {1, 2}, 1);
  CHECK(a.forced);
  CHECK(a.min_cardinality == 2);
  auto b = neighborhood_emptiness_bound(singles, {1}, 1);
  CHECK_FALSE(b.forced);
  std::map<Label, Point> pairs{{1, {10, 11}}, {2, {12, 13}}};
  auto c = neighborhood_emptiness_bound(pairs, {}, 3);
  CHECK(c.forced);
  CHECK(c.min_cardinality == 4);
  std::map<Label, Point> overlap{{1, {10}}, {2, {10, 11}}};
  CHECK_THROWS_AS(neighborhood_emptiness_bound(overlap, {}, 1), PreconditionError);
}
