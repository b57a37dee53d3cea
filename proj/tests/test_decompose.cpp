#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "sigma/decompose.hpp"

using namespace sigma;

namespace {

// Eventually constant point over the ambient, built near the limit so that
// deep pieces are reached.
ProductPoint random_point_near(std::mt19937_64& rng, const Decomposition& d, std::uint32_t ground) {
  ProductPoint x;
  const auto len = std::max<std::size_t>(rng() % 8, d.ambient().factors.size());
  for (std::size_t s = 0; s < len; ++s) {
    if (rng() % 3 != 0) {
      x.prefix.push_back(d.limit().coordinate(s));
    } else {
      x.prefix.push_back(oracle::random_point(rng, ground, d.ambient().bound(s)));
      while (x.prefix.back().size() > d.ambient().bound(s))
        x.prefix.back() = oracle::random_point(rng, ground, d.ambient().bound(s));
    }
  }
  x.tail_value = (rng() & 1U) ? d.limit().tail_value : Point{};
  return x;
}

// Pieces whose box holds x, scanning far enough that the tail is covered.
std::vector<PieceLabel> holders(const Decomposition& d, const ProductPoint& x) {
  std::vector<PieceLabel> out;
  const std::size_t kmax = x.prefix.size() + 2;
  std::vector<PieceLabel> labels;
  switch (d.kind()) {
    case DecompositionKind::absorb_a:
      for (std::size_t k = 0; k <= kmax; ++k)
        for (std::size_t i = 0; i < d.n(); ++i) labels.push_back({'A', k, i});
      break;
    case DecompositionKind::absorb_b:
      for (std::size_t j = 0; j < d.m(); ++j) labels.push_back({'b', 0, j});
      for (std::size_t k = 0; k <= kmax; ++k)
        for (std::size_t i = 0; i < d.n(); ++i) labels.push_back({'B', k, i});
      break;
    case DecompositionKind::classif_k:
      for (std::size_t k = 1; k <= kmax + 1; ++k) labels.push_back({'K', k, 0});
      break;
  }
  for (const auto& l : labels)
    if (box_contains(d.piece(l).box, x)) out.push_back(l);
  return out;
}

Point relabel(const Point& p, const std::vector<Element>& perm) {
  std::vector<Element> e;
  for (auto g : p.elements()) e.push_back(perm.at(g));
  return Point(std::move(e));
}

}  // namespace

TEST_CASE("piece location examples") {
  const auto a = Decomposition::absorb_a(2, {0, 1}, 6);
  CHECK(a.locate(ProductPoint{{Point{0}}, {0, 1}}) == PieceLabel{'A', 0, 1});
  CHECK_FALSE(a.locate(a.limit()).has_value());
  CHECK(a.locate(ProductPoint{{Point{0, 1}, Point{1}}, {0, 1}}) == PieceLabel{'A', 1, 0});

  const auto k = Decomposition::classif_k(5, 6);
  CHECK(k.locate(ProductPoint{{}, {}}) == PieceLabel{'K', 1, 0});
  CHECK(k.locate(ProductPoint{{Point{5}}, {}}) == PieceLabel{'K', 2, 0});
  CHECK_FALSE(k.locate(ProductPoint{{}, Point{5}}).has_value());

  const auto b = Decomposition::absorb_b(1, 2, {0, 1}, 6);
  CHECK(b.locate(ProductPoint{{Point{}}, {0, 1}}) == PieceLabel{'b', 0, 0});
  CHECK(b.locate(ProductPoint{{Point{0}, Point{1}}, {0, 1}}) == PieceLabel{'B', 0, 0});
  CHECK_THROWS_AS(Decomposition::absorb_b(2, 2, {0, 1}, 6), PreconditionError);
  CHECK_THROWS_AS(Decomposition::absorb_a(2, {0, 0}, 6), PreconditionError);
  CHECK_THROWS_AS(a.locate(ProductPoint{{Point{0, 1, 2}}, {}}), PreconditionError);
}

TEST_CASE("claimed types") {
  const auto a = Decomposition::absorb_a(3, {0, 1, 2}, 4);
  CHECK(a.piece({'A', 2, 1}).claimed_type == ProductDescriptor::parse("2 3^w"));
  CHECK(a.pieces().size() == 12);
  const auto b = Decomposition::absorb_b(2, 3, {0, 1, 2}, 4);
  CHECK(b.piece({'b', 0, 1}).claimed_type == ProductDescriptor::parse("1 3^w"));
  CHECK(b.pieces().size() == 2 + 12);
  CHECK(Decomposition::classif_k(0, 3).piece({'K', 3, 0}).claimed_type == ProductDescriptor::parse("1^w"));
  CHECK(PieceLabel{'b', 0, 1}.to_string() == "B'(1)");
  CHECK(PieceLabel{'K', 4, 0}.to_string() == "K(4)");
}

TEST_CASE("verification of every family, serial and parallel") {
  std::vector<Decomposition> ds{Decomposition::absorb_a(2, {0, 1}, 6),
                                Decomposition::absorb_a(3, {0, 1, 2}, 6),
                                Decomposition::absorb_b(1, 2, {0, 1}, 6),
                                Decomposition::absorb_b(2, 3, {0, 1, 2}, 6),
                                Decomposition::classif_k(0, 6)};
  for (const auto& d : ds) {
    VerifyOptions opt;
    opt.seed = 9;
    const auto s = verify(d, opt);
    CHECK(s.ok());
    CHECK(s.failures.empty());
    CHECK(s.limit_hits > 0);
    opt.exec = Exec::parallel;
    const auto p = verify(d, opt);
    CHECK(p.sample_failures == s.sample_failures);
    CHECK(p.limit_hits == s.limit_hits);
    CHECK(p.pairs_checked == s.pairs_checked);
  }
}

TEST_CASE("property: locate names the unique piece holding a point") {
  std::mt19937_64 rng(61);
  std::vector<Decomposition> ds{Decomposition::absorb_a(2, {0, 1}, 6),
                                Decomposition::absorb_b(1, 3, {0, 1, 2}, 6),
                                Decomposition::classif_k(1, 6)};
  for (const auto& d : ds)
    for (int trial = 0; trial < 400; ++trial) {
      const auto x = random_point_near(rng, d, 5);
      const auto where = d.locate(x);
      const auto h = holders(d, x);
      if (where) {
        REQUIRE(h.size() == 1);
        CHECK(h[0] == *where);
      } else {
        CHECK(h.empty());
        CHECK(x.same_as(d.limit()));
      }
    }
}

TEST_CASE("property: the construction is label equivariant") {
  std::mt19937_64 rng(62);
  const std::uint32_t ground = 8;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Element> perm(ground);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto base = Decomposition::absorb_b(1, 3, {0, 1, 2}, 6);
    const auto moved = Decomposition::absorb_b(1, 3, {perm[0], perm[1], perm[2]}, 6);
    const auto x = random_point_near(rng, base, ground);
    ProductPoint y;
    for (const auto& p : x.prefix) y.prefix.push_back(relabel(p, perm));
    y.tail_value = relabel(x.tail_value, perm);
    CHECK(base.locate(x) == moved.locate(y));
  }
}

TEST_CASE("product embedding") {
  CHECK(embed_product_into_sigma({Point{0}, Point{1}}, {1, 1}) == TaggedPoint{{0, 1}, {1, 2}});
  CHECK(embed_product_into_sigma({Point{}, Point{}}, {1, 1}).empty());
  CHECK(embed_product_into_sigma({Point{0, 1}, Point{}}, {2, 1}) == TaggedPoint{{0, 1}, {1, 1}});
  CHECK(to_string(TaggedPoint{{0, 1}, {1, 2}}) == "{(0,1),(1,2)}");
  CHECK_THROWS_AS(embed_product_into_sigma({Point{0, 1}}, {1}), PreconditionError);
}

TEST_CASE("property: the product embedding is injective") {
  for (std::uint32_t factors = 1; factors <= 3; ++factors) {
    ProductDescriptor d;
    std::vector<std::uint32_t> ks;
    for (std::uint32_t f = 0; f < factors; ++f) {
      d.factors.push_back({1 + f % 2});
      ks.push_back(1 + f % 2);
    }
    std::set<TaggedPoint> seen;
    const auto pts = materialize(d, 4, factors);
    for (const auto& x : pts) {
      const auto t = embed_product_into_sigma(x.prefix, ks);
      std::size_t total = 0;
      for (const auto& p : x.prefix) total += p.size();
      CHECK(t.size() == total);
      CHECK(seen.insert(t).second);
    }
    CHECK(seen.size() == pts.size());
  }
}

TEST_CASE("retraction witness") {
  RetractWitness r(3, Point{1, 2});
  CHECK(r.embed(Point{0}) == Point{0, 1, 2});
  CHECK(r.embed(Point{}) == Point{1, 2});
  CHECK(r.retract(Point{0, 3}) == Point{1, 2});
  CHECK(r.retract(Point{1, 2, 4}) == Point{1, 2, 4});
  CHECK_THROWS_AS(RetractWitness(3, Point{1}), PreconditionError);
  CHECK_THROWS_AS(r.embed(Point{1}), PreconditionError);
}

TEST_CASE("property: retraction round trips and box preimages") {
  std::mt19937_64 rng(63);
  const std::uint32_t ground = 5;
  for (std::uint32_t k = 1; k <= 3; ++k) {
    std::vector<Element> f;
    for (Element e = 0; e + 1 < k; ++e) f.push_back(e);
    const RetractWitness r(k, Point(f));
    const auto all = subsets_up_to(ground, k);
    std::set<Point> images;
    for (const auto& x : subsets_up_to(ground, 1)) {
      if (!x.disjoint(Point(f))) continue;
      const auto y = r.embed(x);
      CHECK(box_contains(r.image(), ProductPoint{{y}, {}}));
      CHECK(r.inverse(y) == x);
      images.insert(y);
    }
    for (const auto& y : all) {
      const bool inside = box_contains(r.image(), ProductPoint{{y}, {}});
      CHECK(inside == (images.count(y) == 1));
      if (inside) CHECK(r.embed(r.inverse(y)) == y);
      CHECK(box_contains(r.image(), ProductPoint{{r.retract(y)}, {}}));
    }
    for (int trial = 0; trial < 40; ++trial) {
      auto b = BasicBox::full(ProductDescriptor::single(k))
                   .constrain(0, oracle::random_point(rng, ground, 2), oracle::random_point(rng, ground, 2));
      const auto pre = r.retraction_preimage(b);
      for (const auto& y : all)
        CHECK(pre.contains(ProductPoint{{y}, {}}) == box_contains(b, ProductPoint{{r.retract(y)}, {}}));
    }
  }
}
