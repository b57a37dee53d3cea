#include "sigma/averaging.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sigma {

Point apply_union(std::span<const Point> x) {
  Point y;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i].size() <= 1, "coordinate " + std::to_string(i) + " = " + x[i].to_string() +
                                  " is not a point of sigma_1");
    y = y.unite(x[i]);
  }
  return y;
}

std::vector<Point> canonical_lift(const Point& y, std::uint32_t k) {
  require(y.size() <= k, "|y| = " + std::to_string(y.size()) + " exceeds k = " + std::to_string(k));
  std::vector<Point> x(k);
  auto elems = y.elements();
  for (std::size_t i = 0; i < elems.size(); ++i) x[i] = Point{elems[i]};
  return x;
}

std::uint64_t disjoint_tuple_count(std::size_t m, std::uint32_t k) {
  if (m > k) return 0;
  std::uint64_t c = 1;
  for (std::uint64_t i = 0; i < m; ++i) c *= (k - i);
  return c;
}

DisjointTupleSet enumerate_L(const Point& y, std::uint32_t k) {
  require(y.size() <= k, "L(y) is empty: |y| = " + std::to_string(y.size()) + " > k = " +
                             std::to_string(k));
  DisjointTupleSet out{y, k, {}};
  const auto elems = y.elements();
  std::vector<Point> cur(k);
  auto place = [&](auto&& self, std::size_t e) -> void {
    if (e == elems.size()) {
      out.tuples.push_back(cur);
      return;
    }
    for (std::size_t s = 0; s < k; ++s) {
      if (!cur[s].empty()) continue;
      cur[s] = Point{elems[e]};
      self(self, e + 1);
      cur[s] = Point{};
    }
  };
  place(place, 0);
  std::sort(out.tuples.begin(), out.tuples.end());
  return out;
}

// ---------------------------------------------------------------- operator

std::uint32_t AveragingOperator::domain_arity() const {
  return std::accumulate(blocks.begin(), blocks.end(), 0u);
}

ProductDescriptor AveragingOperator::domain_descriptor() const {
  return ProductDescriptor::power(1, domain_arity());
}

ProductDescriptor AveragingOperator::codomain_descriptor() const {
  ProductDescriptor d;
  for (auto k : blocks) d.factors.push_back(SigmaFactor{k});
  return d;
}

ProductEnumerator AveragingOperator::domain_enumerator(std::uint64_t budget) const {
  return ProductEnumerator(domain_descriptor(), ground, domain_arity(), budget);
}

ProductPoint AveragingOperator::map(const ProductPoint& x) const {
  ProductPoint y;
  std::size_t offset = 0;
  for (auto k : blocks) {
    Point u;
    for (std::size_t i = 0; i < k; ++i) u = u.unite(x.coordinate(offset + i));
    y.prefix.push_back(std::move(u));
    offset += k;
  }
  return y;
}

std::vector<Rational> AveragingOperator::apply(std::span<const Rational> f, Exec exec) const {
  std::vector<Rational> out(rows.size());
  for_each_index(exec, rows.size(), [&](std::uint64_t r) {
    Rational acc = 0;
    for (const auto& e : rows[r]) {
      require(e.domain < f.size(), "function vector shorter than the operator domain");
      acc += e.weight * f[e.domain];
    }
    out[r] = acc;
  });
  return out;
}

std::int64_t AveragingOperator::row_of(const ProductPoint& y) const {
  auto ny = y.normalized();
  for (std::size_t r = 0; r < codomain.size(); ++r)
    if (codomain[r].normalized() == ny) return static_cast<std::int64_t>(r);
  return -1;
}

AveragingOperator build_operator(std::uint32_t k, std::uint32_t ground, Exec exec,
                                 std::uint64_t budget) {
  require(k >= 1, "union map needs k >= 1");
  AveragingOperator op;
  op.blocks = {k};
  op.ground = ground;
  const auto domain = op.domain_enumerator(budget);
  for (auto& y : subsets_up_to(ground, k)) op.codomain.push_back(ProductPoint{{std::move(y)}, {}});
  op.rows.resize(op.codomain.size());
  for_each_index(exec, op.codomain.size(), [&](std::uint64_t r) {
    const auto L = enumerate_L(op.codomain[r].prefix[0], k);
    const Rational w(1, static_cast<unsigned long>(L.tuples.size()));
    auto& row = op.rows[r];
    row.reserve(L.tuples.size());
    for (const auto& x : L.tuples) row.push_back({domain.index_of(ProductPoint{x, {}}), w});
    std::sort(row.begin(), row.end(),
              [](const OperatorEntry& a, const OperatorEntry& b) { return a.domain < b.domain; });
  });
  return op;
}

AveragingOperator product_operator(std::span<const AveragingOperator> ops, std::uint64_t budget) {
  require(!ops.empty(), "product of zero operators");
  AveragingOperator out = ops[0];
  for (std::size_t o = 1; o < ops.size(); ++o) {
    const auto& next = ops[o];
    require(next.ground == out.ground, "product of operators over different ground sets");
    const auto next_domain = next.domain_enumerator(budget).size();
    std::uint64_t rows = out.rows.size() * next.rows.size();
    if (rows > budget) throw BudgetExceeded(rows, budget);
    AveragingOperator prod;
    prod.ground = out.ground;
    prod.blocks = out.blocks;
    prod.blocks.insert(prod.blocks.end(), next.blocks.begin(), next.blocks.end());
    prod.domain_enumerator(budget);  // budget check on the combined domain
    for (std::size_t a = 0; a < out.rows.size(); ++a) {
      for (std::size_t b = 0; b < next.rows.size(); ++b) {
        ProductPoint y = out.codomain[a];
        y.prefix.insert(y.prefix.end(), next.codomain[b].prefix.begin(),
                        next.codomain[b].prefix.end());
        prod.codomain.push_back(std::move(y));
        std::vector<OperatorEntry> row;
        row.reserve(out.rows[a].size() * next.rows[b].size());
        for (const auto& ea : out.rows[a])
          for (const auto& eb : next.rows[b])
            row.push_back({ea.domain * next_domain + eb.domain, ea.weight * eb.weight});
        prod.rows.push_back(std::move(row));
      }
    }
    out = std::move(prod);
  }
  return out;
}

AveragingOperator restrict_operator(const AveragingOperator& op, std::span<const ProductPoint> M) {
  require(!M.empty(), "restriction to an empty set");
  std::set<ProductPoint> members;
  std::vector<std::size_t> row_ids;
  for (const auto& y : M) {
    auto r = op.row_of(y);
    require(r >= 0, "point " + y.to_string() + " is not in the operator codomain");
    if (members.insert(y.normalized()).second) row_ids.push_back(static_cast<std::size_t>(r));
  }
  const auto domain = op.domain_enumerator();
  AveragingOperator out;
  out.blocks = op.blocks;
  out.ground = op.ground;
  for (auto r : row_ids) {
    const auto& y = op.codomain[r];
    const auto& row = op.rows[r];
    std::vector<OperatorEntry> kept;
    Rational total = 0;
    for (const auto& e : row) {
      if (members.count(op.map(domain.at(e.domain)).normalized()) == 0) continue;
      kept.push_back(e);
      total += e.weight;
    }
    if (kept.empty())
      throw std::logic_error("row " + y.to_string() + " has no support in the preimage of M");
    for (auto& e : kept) e.weight /= total;
    out.codomain.push_back(y);
    out.rows.push_back(std::move(kept));
  }
  return out;
}

AxiomReport check_axioms(const AveragingOperator& op, Exec exec, std::uint64_t budget) {
  AxiomReport rep;
  rep.rows = op.rows.size();
  const auto domain = op.domain_enumerator(budget);

  std::map<ProductPoint, std::int64_t> row_index;
  for (std::size_t r = 0; r < op.codomain.size(); ++r)
    row_index.emplace(op.codomain[r].normalized(), static_cast<std::int64_t>(r));

  for (std::size_t r = 0; r < op.rows.size(); ++r)
    for (const auto& e : op.rows[r])
      if (sgn(e.weight) <= 0) {
        rep.positive = false;
        rep.failures.push_back("non-positive weight in row " + op.codomain[r].to_string());
      }

  const std::vector<Rational> ones(domain.size(), Rational(1));
  const auto t1 = op.apply(ones, exec);
  for (std::size_t r = 0; r < t1.size(); ++r)
    if (t1[r] != 1) {
      rep.preserves_one = false;
      rep.failures.push_back("T(1)(" + op.codomain[r].to_string() + ") = " + t1[r].get_str());
    }

  // T(1_{y0} o p)(y) for every pair (y, y0), evaluated row by row: the
  // entries of row y are grouped by the codomain point their domain point
  // maps to.
  std::vector<std::string> row_failures(op.rows.size());
  for_each_index(exec, op.rows.size(), [&](std::uint64_t r) {
    std::map<std::int64_t, Rational> by_target;
    for (const auto& e : op.rows[r]) {
      auto it = row_index.find(op.map(domain.at(e.domain)).normalized());
      by_target[it == row_index.end() ? -1 : it->second] += e.weight;
    }
    for (const auto& [target, value] : by_target) {
      const Rational expected = target == static_cast<std::int64_t>(r) ? 1 : 0;
      if (value != expected) {
        row_failures[r] = "T(g o p) != g at row " + op.codomain[r].to_string();
        return;
      }
    }
    if (by_target.count(static_cast<std::int64_t>(r)) == 0)
      row_failures[r] = "row " + op.codomain[r].to_string() + " has no mass on its own fiber";
  });
  for (auto& f : row_failures)
    if (!f.empty()) {
      rep.inverts_map = false;
      rep.failures.push_back(std::move(f));
    }
  return rep;
}

bool rows_match_L(const AveragingOperator& op) {
  if (op.blocks.size() != 1) return false;
  const auto k = op.blocks[0];
  const auto domain = op.domain_enumerator();
  for (std::size_t r = 0; r < op.rows.size(); ++r) {
    const auto L = enumerate_L(op.codomain[r].prefix.at(0), k);
    std::set<std::uint64_t> expected;
    for (const auto& x : L.tuples) expected.insert(domain.index_of(ProductPoint{x, {}}));
    std::set<std::uint64_t> got;
    const Rational w(1, static_cast<unsigned long>(L.tuples.size()));
    for (const auto& e : op.rows[r]) {
      if (e.weight != w) return false;
      got.insert(e.domain);
    }
    if (got != expected || op.rows[r].size() != expected.size()) return false;
  }
  return true;
}

FiberMap fiber_map(const Point& y, const Point& y_prime, std::uint32_t k) {
  require(y.subset_of(y_prime), "fiber map needs y " + y.to_string() + " inside y' " +
                                    y_prime.to_string());
  require(y_prime.size() <= k, "|y'| exceeds k");
  FiberMap fm{y, y_prime, k, {}, 0};
  const auto Ly = enumerate_L(y, k);
  const auto Lyp = enumerate_L(y_prime, k);
  std::map<std::vector<Point>, std::uint64_t> fibers;
  for (const auto& x : Ly.tuples) fibers.emplace(x, 0);
  for (const auto& xp : Lyp.tuples) {
    std::vector<Point> rx(k);
    for (std::size_t i = 0; i < k; ++i) rx[i] = xp[i].intersect(y);
    auto it = fibers.find(rx);
    if (it == fibers.end()) throw std::logic_error("r(x) left L(y) for x in L(y')");
    ++it->second;
    fm.assignment.emplace_back(xp, std::move(rx));
  }
  fm.fiber_size = fibers.begin()->second;
  for (const auto& [x, n] : fibers)
    if (n != fm.fiber_size || n == 0) throw std::logic_error("fibers of r are not uniform");
  return fm;
}

// ---------------------------------------------------------------- locality

namespace {

std::vector<std::int64_t> membership_pattern(const ProductPoint& x, std::size_t k, const Point& F) {
  std::vector<std::int64_t> pat(k, -1);
  for (std::size_t i = 0; i < k; ++i) {
    auto t = x.coordinate(i).intersect(F);
    if (!t.empty()) pat[i] = t.elements()[0];
  }
  return pat;
}

}  // namespace

LocalityTable locality_table(const AveragingOperator& op, const Point& F,
                             std::span<const Rational> f) {
  require(op.blocks.size() == 1, "locality law is stated for a single union map");
  const auto k = op.blocks[0];
  const auto domain = op.domain_enumerator();
  require(f.size() == domain.size(), "function vector does not match the operator domain");

  std::map<std::vector<std::int64_t>, Rational> by_pattern;
  for (std::uint64_t d = 0; d < domain.size(); ++d) {
    auto [it, fresh] = by_pattern.emplace(membership_pattern(domain.at(d), k, F), f[d]);
    require(fresh || it->second == f[d],
            "function depends on more than the memberships of " + F.to_string());
  }

  LocalityTable table;
  const auto tf = op.apply(f);
  for (std::size_t r = 0; r < op.rows.size(); ++r) {
    const auto& y = op.codomain[r].prefix[0];
    LocalityKey key{y.intersect(F), y.size()};
    auto [it, fresh] = table.levels.emplace(key, tf[r]);
    if (!fresh && it->second != tf[r]) table.pass = false;
  }
  return table;
}

LocalityProfile locality_profile(const AveragingOperator& op, const Point& F) {
  require(op.blocks.size() == 1, "locality law is stated for a single union map");
  const auto k = op.blocks[0];
  const auto domain = op.domain_enumerator();
  std::vector<std::int64_t> symbols{-1};
  for (auto e : F.elements()) symbols.push_back(e);

  LocalityProfile prof;
  std::vector<std::size_t> digit(k, 0);
  while (true) {
    std::vector<std::int64_t> pat(k);
    for (std::size_t i = 0; i < k; ++i) pat[i] = symbols[digit[i]];
    std::vector<Rational> f(domain.size());
    for (std::uint64_t d = 0; d < domain.size(); ++d)
      f[d] = membership_pattern(domain.at(d), k, F) == pat ? 1 : 0;
    auto table = locality_table(op, F, f);
    prof.pass = prof.pass && table.pass;
    prof.patterns.push_back(std::move(pat));
    prof.tables.push_back(std::move(table));

    std::size_t i = k;
    while (i > 0) {
      if (++digit[i - 1] < symbols.size()) break;
      digit[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return prof;
}

}  // namespace sigma
