#include "sigma/ground.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <iterator>
#include <sstream>

#include "sigma/text.hpp"

namespace sigma {

std::uint64_t budget_from_env() {
  if (const char* env = std::getenv("SIGMA_BUDGET")) {
    std::uint64_t v = 0;
    std::string_view sv(env);
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec == std::errc() && ptr == sv.data() + sv.size() && v > 0) return v;
  }
  return kDefaultBudget;
}

// ---------------------------------------------------------------- ExtNat

std::string ExtNat::to_string() const { return is_omega() ? "w" : std::to_string(v_); }

ExtNat ExtNat::parse(std::string_view text) {
  text = text::trim(text);
  if (text == "w" || text == "W") return omega();
  return ExtNat(text::parse_uint(text, "cardinal"));
}

// ---------------------------------------------------------------- Point

Point::Point(std::initializer_list<Element> elems) : Point(std::vector<Element>(elems)) {}

Point::Point(std::vector<Element> elems) : elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

bool Point::contains(Element e) const {
  return std::binary_search(elems_.begin(), elems_.end(), e);
}

bool Point::subset_of(const Point& other) const {
  return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
}

bool Point::disjoint(const Point& other) const {
  auto a = elems_.begin();
  auto b = other.elems_.begin();
  while (a != elems_.end() && b != other.elems_.end()) {
    if (*a == *b) return false;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return true;
}

Point Point::unite(const Point& other) const {
  Point out;
  std::set_union(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                 std::back_inserter(out.elems_));
  return out;
}

Point Point::intersect(const Point& other) const {
  Point out;
  std::set_intersection(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                        std::back_inserter(out.elems_));
  return out;
}

Point Point::minus(const Point& other) const {
  Point out;
  std::set_difference(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                      std::back_inserter(out.elems_));
  return out;
}

std::string Point::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(elems_[i]);
  }
  s += '}';
  return s;
}

Point Point::parse(std::string_view text) {
  text = text::trim(text);
  require(text.size() >= 2 && text.front() == '{' && text.back() == '}',
          "malformed set '" + std::string(text) + "': expected {e1,e2,...}");
  std::vector<Element> elems;
  for (auto item : text::split(text.substr(1, text.size() - 2), ',')) {
    item = text::trim(item);
    if (item.empty()) continue;
    auto v = text::parse_uint(item, "set element");
    require(v <= 0xffffffffULL, "set element out of range");
    elems.push_back(static_cast<Element>(v));
  }
  return Point(std::move(elems));
}

// ---------------------------------------------------------------- descriptors

std::uint32_t ProductDescriptor::bound(std::size_t s) const {
  if (s < factors.size()) return factors[s].n;
  require(omega_tail.has_value(),
          "coordinate " + std::to_string(s) + " outside a product of " +
              std::to_string(factors.size()) + " factors");
  return omega_tail->n;
}

ProductDescriptor ProductDescriptor::simplified() const {
  ProductDescriptor out;
  for (const auto& f : factors)
    if (f.n != 0) out.factors.push_back(f);
  if (omega_tail && omega_tail->n != 0) {
    out.omega_tail = omega_tail;
    // sigma_n x sigma_n^w = sigma_n^w
    std::erase_if(out.factors, [&](const SigmaFactor& f) { return f.n == omega_tail->n; });
  }
  std::sort(out.factors.begin(), out.factors.end());
  return out;
}

std::string ProductDescriptor::to_string() const {
  std::string s;
  for (const auto& f : factors) {
    if (!s.empty()) s += ' ';
    s += std::to_string(f.n);
  }
  if (omega_tail) {
    if (!s.empty()) s += ' ';
    s += std::to_string(omega_tail->n) + "^w";
  }
  return s.empty() ? "-" : s;
}

ProductDescriptor ProductDescriptor::parse(std::string_view text) {
  ProductDescriptor d;
  text = text::trim(text);
  if (text == "-" || text.empty()) return d;
  auto tokens = text::split_ws(text);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    auto tok = tokens[t];
    auto caret = tok.find('^');
    if (caret == std::string_view::npos) {
      require(!d.omega_tail, "factors after the w-tail are not allowed");
      d.factors.push_back(SigmaFactor{static_cast<std::uint32_t>(text::parse_uint(tok, "factor"))});
      continue;
    }
    auto base = static_cast<std::uint32_t>(text::parse_uint(tok.substr(0, caret), "factor"));
    auto exp = tok.substr(caret + 1);
    if (exp == "w") {
      require(t + 1 == tokens.size(), "the w-tail must be the last factor");
      d.omega_tail = SigmaFactor{base};
    } else {
      require(!d.omega_tail, "factors after the w-tail are not allowed");
      auto e = text::parse_uint(exp, "exponent");
      require(e <= 64, "finite exponent too large");
      for (std::uint64_t i = 0; i < e; ++i) d.factors.push_back(SigmaFactor{base});
    }
  }
  return d;
}

bool ProductPoint::fits(const ProductDescriptor& desc) const {
  for (std::size_t s = 0; s < prefix.size(); ++s) {
    if (!desc.has_coordinate(s) || prefix[s].size() > desc.bound(s)) return false;
  }
  if (desc.omega_tail) return tail_value.size() <= desc.omega_tail->n;
  // finite product: coordinates beyond the prefix do not exist
  return prefix.size() >= desc.factors.size() && tail_value.empty();
}

ProductPoint ProductPoint::normalized() const {
  ProductPoint out = *this;
  while (!out.prefix.empty() && out.prefix.back() == out.tail_value) out.prefix.pop_back();
  return out;
}

std::string ProductPoint::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (i) s += ',';
    s += prefix[i].to_string();
  }
  if (!tail_value.empty()) s += (prefix.empty() ? "" : ",") + tail_value.to_string() + "...";
  s += ')';
  return s;
}

// ---------------------------------------------------------------- tau

TauSequence::TauSequence(std::vector<ExtNat> prefix, ExtNat tail)
    : prefix_(std::move(prefix)), tail_(tail) {
  while (!prefix_.empty() && prefix_.back() == tail_) prefix_.pop_back();
}

ExtNat TauSequence::at(std::size_t n) const {
  require(n >= 1, "tau is indexed from 1");
  return n <= prefix_.size() ? prefix_[n - 1] : tail_;
}

std::vector<std::pair<std::size_t, ExtNat>> TauSequence::entries() const {
  std::vector<std::pair<std::size_t, ExtNat>> out;
  for (std::size_t n = 1; n <= prefix_.size(); ++n) out.emplace_back(n, prefix_[n - 1]);
  return out;
}

std::string TauSequence::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (i) s += ',';
    s += prefix_[i].to_string();
  }
  if (!s.empty()) s += ' ';
  s += "tail=" + tail_.to_string();
  return s;
}

TauSequence TauSequence::parse(std::string_view text) {
  text = text::trim(text);
  ExtNat tail{0};
  auto pos = text.find("tail=");
  if (pos != std::string_view::npos) {
    tail = ExtNat::parse(text.substr(pos + 5));
    text = text::trim(text.substr(0, pos));
  }
  std::vector<ExtNat> prefix;
  if (!text.empty()) {
    for (auto item : text::split(text, ',')) {
      item = text::trim(item);
      require(!item.empty(), "empty tau entry");
      prefix.push_back(ExtNat::parse(item));
    }
  }
  return TauSequence(std::move(prefix), tail);
}

ExtNat i_of(const TauSequence& tau) {
  if (tau.tail().is_omega()) return ExtNat::omega();
  const auto& p = tau.prefix();
  for (std::size_t n = p.size(); n >= 1; --n)
    if (p[n - 1].is_omega()) return ExtNat(n);
  return ExtNat(0);
}

ExtNat j_of(const TauSequence& tau) {
  if (tau.tail() > ExtNat(0)) return ExtNat::omega();
  const auto& p = tau.prefix();
  for (std::size_t n = p.size(); n >= 1; --n)
    if (p[n - 1] > ExtNat(0)) return ExtNat(n);
  return ExtNat(0);
}

// ---------------------------------------------------------------- enumeration

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

void subsets_of_size(std::uint32_t ground, std::uint32_t size, std::uint32_t start,
                     std::vector<Element>& cur, std::vector<Point>& out) {
  if (cur.size() == size) {
    out.emplace_back(cur);
    return;
  }
  for (std::uint32_t e = start; e < ground; ++e) {
    cur.push_back(e);
    subsets_of_size(ground, size, e + 1, cur, out);
    cur.pop_back();
  }
}

std::uint64_t mul_capped(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::vector<std::uint32_t> coordinate_bounds(const ProductDescriptor& desc, std::size_t depth) {
  require(depth >= desc.factors.size(),
          "depth " + std::to_string(depth) + " is smaller than the " +
              std::to_string(desc.factors.size()) + " explicit factors");
  std::vector<std::uint32_t> bounds;
  for (const auto& f : desc.factors) bounds.push_back(f.n);
  if (desc.omega_tail)
    while (bounds.size() < depth) bounds.push_back(desc.omega_tail->n);
  return bounds;
}

}  // namespace

std::vector<Point> subsets_up_to(std::uint32_t ground, std::uint32_t n) {
  std::vector<Point> out;
  std::vector<Element> cur;
  for (std::uint32_t size = 0; size <= std::min(n, ground); ++size)
    subsets_of_size(ground, size, 0, cur, out);
  return out;
}

std::uint64_t materialized_count(const ProductDescriptor& desc, std::uint32_t ground,
                                 std::size_t depth) {
  std::uint64_t total = 1;
  for (auto n : coordinate_bounds(desc, depth)) {
    std::uint64_t per = 0;
    for (std::uint32_t m = 0; m <= n; ++m) per += binomial(ground, m);
    total = mul_capped(total, per);
  }
  return total;
}

ProductEnumerator::ProductEnumerator(const ProductDescriptor& desc, std::uint32_t ground,
                                     std::size_t depth, std::uint64_t budget)
    : bounds_(coordinate_bounds(desc, depth)) {
  require(ground >= 1, "ground size must be at least 1");
  auto count = materialized_count(desc, ground, depth);
  if (count > budget) throw BudgetExceeded(count, budget);
  std::uint32_t max_bound = 0;
  for (auto b : bounds_) max_bound = std::max(max_bound, b);
  choices_.resize(max_bound + 1);
  ranks_.resize(max_bound + 1);
  for (auto b : bounds_) {
    if (!choices_[b].empty()) continue;
    choices_[b] = subsets_up_to(ground, b);
    for (std::uint64_t r = 0; r < choices_[b].size(); ++r) ranks_[b].emplace(choices_[b][r], r);
  }
  radix_.resize(bounds_.size());
  for (std::size_t s = bounds_.size(); s-- > 0;) {
    radix_[s] = size_;
    size_ *= choices_[bounds_[s]].size();
  }
}

ProductPoint ProductEnumerator::at(std::uint64_t index) const {
  ProductPoint x;
  x.prefix.reserve(bounds_.size());
  for (std::size_t s = 0; s < bounds_.size(); ++s) {
    const auto& ch = choices_[bounds_[s]];
    x.prefix.push_back(ch[(index / radix_[s]) % ch.size()]);
  }
  return x;
}

std::uint64_t ProductEnumerator::index_of(const ProductPoint& x) const {
  require(x.tail_value.empty() && x.normalized().prefix.size() <= bounds_.size(),
          "point " + x.to_string() + " has coordinates beyond the materialized depth");
  std::uint64_t idx = 0;
  for (std::size_t s = 0; s < bounds_.size(); ++s) {
    const auto& ranks = ranks_[bounds_[s]];
    auto it = ranks.find(x.coordinate(s));
    require(it != ranks.end(), "point " + x.to_string() + " is outside the enumeration");
    idx += it->second * radix_[s];
  }
  return idx;
}

std::vector<ProductPoint> materialize(const ProductDescriptor& desc, std::uint32_t ground,
                                      std::size_t depth, std::uint64_t budget) {
  ProductEnumerator en(desc, ground, depth, budget);
  std::vector<ProductPoint> out;
  out.reserve(en.size());
  for (std::uint64_t i = 0; i < en.size(); ++i) out.push_back(en.at(i));
  return out;
}

}  // namespace sigma
