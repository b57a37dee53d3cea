#include "sigma/clopen.hpp"

#include <algorithm>
#include <numeric>

#include "sigma/text.hpp"

namespace sigma {

namespace {

void require_same_ambient(const BasicBox& a, const BasicBox& b) {
  require(a.ambient == b.ambient, "boxes over different ambients: " + a.ambient.to_string() +
                                      " vs " + b.ambient.to_string());
}

}  // namespace

BasicBox& BasicBox::constrain(std::size_t s, Point F, Point G) {
  require(ambient.has_coordinate(s), "coordinate " + std::to_string(s) + " not in ambient " +
                                         ambient.to_string());
  auto& c = constraints[s];
  c.F = c.F.unite(F);
  c.G = c.G.unite(G);
  return *this;
}

std::string BasicBox::to_string() const {
  std::string s = "[";
  bool first = true;
  for (const auto& [coord, c] : constraints) {
    if (!first) s += "; ";
    first = false;
    s += std::to_string(coord) + ": F=" + c.F.to_string() + " G=" + c.G.to_string();
  }
  s += "] @ " + ambient.to_string();
  return s;
}

BasicBox BasicBox::parse(std::string_view input) {
  auto at = input.rfind('@');
  require(at != std::string_view::npos, "box text needs '@ ambient'");
  BasicBox b;
  b.ambient = ProductDescriptor::parse(input.substr(at + 1));
  auto body = text::trim(input.substr(0, at));
  require(body.size() >= 2 && body.front() == '[' && body.back() == ']',
          "box constraints must be enclosed in [...]");
  body = text::trim(body.substr(1, body.size() - 2));
  if (body.empty()) return b;
  for (auto item : text::split_top_level(body, ';')) {
    item = text::trim(item);
    if (item.empty()) continue;
    auto colon = item.find(':');
    require(colon != std::string_view::npos, "constraint needs 'coordinate:'");
    auto coord = text::parse_uint(item.substr(0, colon), "coordinate");
    Point F, G;
    auto rest = text::trim(item.substr(colon + 1));
    while (!rest.empty()) {
      require(rest.size() > 2 && (rest[0] == 'F' || rest[0] == 'G') && rest[1] == '=',
              "expected F={..} or G={..} in '" + std::string(item) + "'");
      auto close = rest.find('}');
      require(close != std::string_view::npos, "unterminated set in box text");
      auto set = Point::parse(rest.substr(2, close - 1));
      (rest[0] == 'F' ? F : G) = set;
      rest = text::trim(rest.substr(close + 1));
    }
    b.constrain(coord, F, G);
  }
  return b;
}

bool ClopenSet::contains(const ProductPoint& x) const {
  return std::any_of(boxes.begin(), boxes.end(),
                     [&](const BasicBox& b) { return box_contains(b, x); });
}

std::string ClopenSet::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (i) s += " | ";
    s += boxes[i].to_string();
  }
  return s.empty() ? "empty @ " + ambient.to_string() : s;
}

bool box_is_empty(const BasicBox& b) {
  for (const auto& [s, c] : b.constraints) {
    if (!c.F.disjoint(c.G)) return true;
    if (c.F.size() > b.ambient.bound(s)) return true;
  }
  return false;
}

bool box_contains(const BasicBox& b, const ProductPoint& x) {
  for (const auto& [s, c] : b.constraints) {
    const auto& y = x.coordinate(s);
    if (!c.F.subset_of(y) || !y.disjoint(c.G)) return false;
  }
  return true;
}

BasicBox box_intersect(const BasicBox& a, const BasicBox& b) {
  require_same_ambient(a, b);
  BasicBox out = a;
  for (const auto& [s, c] : b.constraints) out.constrain(s, c.F, c.G);
  return out;
}

ClopenSet box_complement(const BasicBox& b) {
  ClopenSet out{{}, b.ambient};
  for (const auto& [s, c] : b.constraints) {
    for (auto f : c.F.elements()) out.boxes.push_back(BasicBox::full(b.ambient).constrain(s, {}, {f}));
    for (auto g : c.G.elements()) {
      auto box = BasicBox::full(b.ambient).constrain(s, {g}, {});
      if (!box_is_empty(box)) out.boxes.push_back(std::move(box));
    }
  }
  return out;
}

bool box_subset(const BasicBox& a, const BasicBox& b) {
  require_same_ambient(a, b);
  if (box_is_empty(a)) return true;
  const auto comp = box_complement(b);
  return std::all_of(comp.boxes.begin(), comp.boxes.end(),
                     [&](const BasicBox& c) { return box_is_empty(box_intersect(a, c)); });
}

ProductPoint BoxReduction::forward(const ProductPoint& x) const {
  ProductPoint z = x;
  std::size_t last = removed.empty() ? 0 : removed.rbegin()->first + 1;
  if (z.prefix.size() < last) z.prefix.resize(last, x.tail_value);
  for (const auto& [s, F] : removed) z.prefix[s] = z.prefix[s].minus(F);
  return z;
}

ProductPoint BoxReduction::backward(const ProductPoint& z) const {
  ProductPoint x = z;
  std::size_t last = removed.empty() ? 0 : removed.rbegin()->first + 1;
  if (x.prefix.size() < last) x.prefix.resize(last, z.tail_value);
  for (const auto& [s, F] : removed) x.prefix[s] = x.prefix[s].unite(F);
  return x;
}

BoxReduction box_reduce(const BasicBox& b) {
  require(!box_is_empty(b), "cannot reduce an empty box " + b.to_string());
  BoxReduction r;
  r.type = b.ambient;
  std::size_t last = b.constraints.empty() ? 0 : b.constraints.rbegin()->first + 1;
  // constrained tail coordinates become explicit factors
  while (r.type.factors.size() < last) r.type.factors.push_back(*b.ambient.omega_tail);
  for (const auto& [s, c] : b.constraints) {
    r.type.factors[s].n -= static_cast<std::uint32_t>(c.F.size());
    r.removed.emplace(s, c.F);
    r.avoided.emplace(s, c.F.unite(c.G));
  }
  return r;
}

ClopenSet preimage_under_union(const BasicBox& b, std::uint32_t k) {
  require(k >= 1, "union map needs k >= 1");
  require(b.ambient == ProductDescriptor::single(k),
          "preimage_under_union expects a box over sigma_" + std::to_string(k) + ", got " +
              b.ambient.to_string());
  require(!box_is_empty(b), "preimage of an empty box requested");
  ClopenSet out{{}, ProductDescriptor::power(1, k)};
  Point F, G;
  if (auto it = b.constraints.find(0); it != b.constraints.end()) {
    F = it->second.F;
    G = it->second.G;
  }
  const auto elems = F.elements();
  // injective assignments of F's elements to coordinates, lexicographic
  std::vector<std::size_t> slot(elems.size(), 0);
  std::vector<bool> used(k, false);
  auto emit = [&] {
    BasicBox box = BasicBox::full(out.ambient);
    if (!G.empty())
      for (std::size_t s = 0; s < k; ++s) box.constrain(s, {}, G);
    for (std::size_t e = 0; e < elems.size(); ++e) box.constrain(slot[e], {elems[e]}, {});
    out.boxes.push_back(std::move(box));
  };
  auto recurse = [&](auto&& self, std::size_t e) -> void {
    if (e == elems.size()) {
      emit();
      return;
    }
    for (std::size_t s = 0; s < k; ++s) {
      if (used[s]) continue;
      used[s] = true;
      slot[e] = s;
      self(self, e + 1);
      used[s] = false;
    }
  };
  recurse(recurse, 0);
  return out;
}

std::uint64_t preimage_mismatches(const BasicBox& b, const ClopenSet& pre, std::uint32_t k,
                                  std::uint32_t ground, Exec exec, std::uint64_t budget) {
  ProductEnumerator en(ProductDescriptor::power(1, k), ground, k, budget);
  return count_if_index(exec, en.size(), [&](std::uint64_t i) {
    auto x = en.at(i);
    Point y;
    for (const auto& c : x.prefix) y = y.unite(c);
    return pre.contains(x) != box_contains(b, ProductPoint{{y}, {}});
  });
}

CoverWitness union_membership_cover(const ClopenSet& target, const ProductDescriptor& probe) {
  require(target.ambient == probe, "cover target ambient " + target.ambient.to_string() +
                                       " differs from probe " + probe.to_string());
  const ProductPoint origin;  // (∅, ∅, ...)
  for (std::size_t i = 0; i < target.boxes.size(); ++i) {
    const auto& box = target.boxes[i];
    if (!box_contains(box, origin)) continue;
    BasicBox witness = BasicBox::full(probe);
    for (const auto& [s, c] : box.constraints) witness.constrain(s, {}, c.G);
    return {i, witness, box_reduce(witness)};
  }
  throw PreconditionError("no member of the union contains the all-empty point; it does not cover " +
                          probe.to_string());
}

}  // namespace sigma
