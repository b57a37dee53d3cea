#include "sigma/decompose.hpp"

#include <algorithm>
#include <random>

namespace sigma {

std::string PieceLabel::to_string() const {
  switch (family) {
    case 'A': return "A(" + std::to_string(k) + "," + std::to_string(i) + ")";
    case 'B': return "B(" + std::to_string(k) + "," + std::to_string(i) + ")";
    case 'b': return "B'(" + std::to_string(i) + ")";
    case 'K': return "K(" + std::to_string(k) + ")";
  }
  return "?";
}

namespace {

Point first_witnesses(const std::vector<Element>& w, std::size_t count) {
  return Point(std::vector<Element>(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(count)));
}

void check_witnesses(const std::vector<Element>& w, std::uint32_t n) {
  require(w.size() == n, "need exactly " + std::to_string(n) + " witnesses, got " + std::to_string(w.size()));
  require(Point(w).size() == w.size(), "witnesses must be distinct");
}

ProductDescriptor tail_power(std::uint32_t n, std::vector<SigmaFactor> front = {}) {
  return {std::move(front), SigmaFactor{n}};
}

}  // namespace

Decomposition Decomposition::absorb_a(std::uint32_t n, std::vector<Element> witnesses,
                                      std::size_t depth) {
  require(n >= 1, "absorption needs n >= 1");
  require(depth >= 1, "depth must be at least 1");
  check_witnesses(witnesses, n);
  Decomposition d;
  d.kind_ = DecompositionKind::absorb_a;
  d.n_ = n;
  d.depth_ = depth;
  d.witnesses_ = std::move(witnesses);
  d.ambient_ = tail_power(n);
  d.limit_ = {{}, Point(d.witnesses_)};
  for (std::size_t k = 0; k < depth; ++k)
    for (std::size_t i = 0; i < n; ++i) d.pieces_.push_back(d.piece({'A', k, i}));
  return d;
}

Decomposition Decomposition::absorb_b(std::uint32_t m, std::uint32_t n,
                                      std::vector<Element> witnesses, std::size_t depth) {
  require(m < n, "absorb_small needs m < n, got m = " + std::to_string(m) + ", n = " + std::to_string(n));
  require(depth >= 1, "depth must be at least 1");
  check_witnesses(witnesses, n);
  Decomposition d;
  d.kind_ = DecompositionKind::absorb_b;
  d.m_ = m;
  d.n_ = n;
  d.depth_ = depth;
  d.witnesses_ = std::move(witnesses);
  d.ambient_ = tail_power(n, {SigmaFactor{m}});
  d.limit_ = {{first_witnesses(d.witnesses_, m)}, Point(d.witnesses_)};
  for (std::size_t j = 0; j < m; ++j) d.pieces_.push_back(d.piece({'b', 0, j}));
  for (std::size_t k = 0; k < depth; ++k)
    for (std::size_t i = 0; i < n; ++i) d.pieces_.push_back(d.piece({'B', k, i}));
  return d;
}

Decomposition Decomposition::classif_k(Element gamma, std::size_t depth) {
  require(depth >= 1, "depth must be at least 1");
  Decomposition d;
  d.kind_ = DecompositionKind::classif_k;
  d.n_ = 1;
  d.depth_ = depth;
  d.witnesses_ = {gamma};
  d.ambient_ = tail_power(1);
  d.limit_ = {{}, Point{gamma}};
  for (std::size_t n = 1; n <= depth; ++n) d.pieces_.push_back(d.piece({'K', n, 0}));
  return d;
}

DecompositionPiece Decomposition::piece(const PieceLabel& label) const {
  DecompositionPiece p;
  p.label = label;
  p.box = BasicBox::full(ambient_);
  const Point W(witnesses_);
  switch (kind_) {
    case DecompositionKind::absorb_a:
      require(label.family == 'A' && label.i < n_, "no piece " + label.to_string() + " here");
      for (std::size_t j = 0; j < label.k; ++j) p.box.constrain(j, W, {});
      p.box.constrain(label.k, first_witnesses(witnesses_, label.i), {witnesses_[label.i]});
      p.claimed_type = tail_power(n_, {SigmaFactor{n_ - static_cast<std::uint32_t>(label.i)}});
      p.fixed_prefix = label.k;
      break;
    case DecompositionKind::absorb_b:
      if (label.family == 'b') {
        require(label.i < m_, "no piece " + label.to_string() + " here");
        p.box.constrain(0, first_witnesses(witnesses_, label.i), {witnesses_[label.i]});
        p.claimed_type = tail_power(n_, {SigmaFactor{m_ - static_cast<std::uint32_t>(label.i)}});
        p.fixed_prefix = 0;
        break;
      }
      require(label.family == 'B' && label.i < n_, "no piece " + label.to_string() + " here");
      p.box.constrain(0, first_witnesses(witnesses_, m_), {});
      for (std::size_t j = 0; j < label.k; ++j) p.box.constrain(1 + j, W, {});
      p.box.constrain(1 + label.k, first_witnesses(witnesses_, label.i), {witnesses_[label.i]});
      p.claimed_type = tail_power(n_, {SigmaFactor{n_ - static_cast<std::uint32_t>(label.i)}});
      p.fixed_prefix = 1 + label.k;
      break;
    case DecompositionKind::classif_k:
      require(label.family == 'K' && label.k >= 1, "no piece " + label.to_string() + " here");
      for (std::size_t j = 0; j + 1 < label.k; ++j) p.box.constrain(j, W, {});
      p.box.constrain(label.k - 1, {}, W);
      p.claimed_type = tail_power(1);
      p.fixed_prefix = label.k - 1;
      break;
  }
  return p;
}

std::optional<PieceLabel> Decomposition::locate(const ProductPoint& x) const {
  require(x.fits(ambient_), "point " + x.to_string() + " is not in " + ambient_.to_string());
  // Scan (k, i) in lexicographic order for the first gamma_i missing from x_k.
  std::size_t offset = 0;
  if (kind_ == DecompositionKind::absorb_b) {
    const auto& y = x.coordinate(0);
    for (std::size_t j = 0; j < m_; ++j)
      if (!y.contains(witnesses_[j])) return PieceLabel{'b', 0, j};
    offset = 1;
  }
  const char family = kind_ == DecompositionKind::absorb_a ? 'A' : kind_ == DecompositionKind::absorb_b ? 'B' : 'K';
  const std::size_t last = std::max(x.prefix.size(), offset) - offset;  // x_k = tail for k >= last
  for (std::size_t k = 0; k <= last; ++k) {
    const auto& xk = x.coordinate(offset + k);
    for (std::size_t i = 0; i < witnesses_.size(); ++i) {
      if (xk.contains(witnesses_[i])) continue;
      if (family == 'K') return PieceLabel{'K', k + 1, 0};
      return PieceLabel{family, k, i};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- verify

namespace {

std::vector<PieceLabel> labels_up_to(const Decomposition& d, std::size_t kmax) {
  std::vector<PieceLabel> out;
  switch (d.kind()) {
    case DecompositionKind::absorb_a:
      for (std::size_t k = 0; k <= kmax; ++k)
        for (std::size_t i = 0; i < d.n(); ++i) out.push_back({'A', k, i});
      break;
    case DecompositionKind::absorb_b:
      for (std::size_t j = 0; j < d.m(); ++j) out.push_back({'b', 0, j});
      for (std::size_t k = 0; k <= kmax; ++k)
        for (std::size_t i = 0; i < d.n(); ++i) out.push_back({'B', k, i});
      break;
    case DecompositionKind::classif_k:
      for (std::size_t k = 1; k <= kmax + 1; ++k) out.push_back({'K', k, 0});
      break;
  }
  return out;
}

Point random_subset(std::mt19937_64& rng, const std::vector<Element>& pool, std::uint32_t bound) {
  std::uniform_int_distribution<std::uint32_t> size_dist(0, std::min<std::uint32_t>(bound, pool.size()));
  auto size = size_dist(rng);
  std::vector<Element> shuffled = pool;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  shuffled.resize(size);
  return Point(std::move(shuffled));
}

Point random_part(std::mt19937_64& rng, const std::vector<Element>& pool) {
  std::vector<Element> out;
  for (auto e : pool)
    if (rng() & 1U) out.push_back(e);
  return Point(std::move(out));
}

}  // namespace

DecompositionReport verify(const Decomposition& d, const VerifyOptions& opt) {
  DecompositionReport rep;
  const auto& pieces = d.pieces();
  auto note = [&rep](std::string msg) {
    if (rep.failures.size() < 8) rep.failures.push_back(std::move(msg));
  };

  rep.types_ok = true;
  for (const auto& p : pieces) {
    if (box_is_empty(p.box) || box_reduce(p.box).type.simplified() != p.claimed_type.simplified()) {
      rep.types_ok = false;
      note("type mismatch at " + p.label.to_string());
    }
  }

  const std::uint64_t np = pieces.size();
  rep.pairs_checked = np * (np - 1) / 2;
  std::vector<char> overlap(np * np, 0);
  for_each_index(opt.exec, np * np, [&](std::uint64_t idx) {
    auto a = idx / np, b = idx % np;
    if (a < b) overlap[idx] = box_is_empty(box_intersect(pieces[a].box, pieces[b].box)) ? 0 : 1;
  });
  rep.disjoint_ok = true;
  for (std::uint64_t idx = 0; idx < overlap.size(); ++idx)
    if (overlap[idx]) {
      rep.disjoint_ok = false;
      note("overlap " + pieces[idx / np].label.to_string() + " / " + pieces[idx % np].label.to_string());
    }

  std::vector<Element> pool = d.witnesses();
  const Element top = *std::max_element(pool.begin(), pool.end());
  std::vector<Element> extras = {top + 1, top + 2, top + 3};
  pool.insert(pool.end(), extras.begin(), extras.end());

  std::mt19937_64 rng(opt.seed);
  const auto& limit = d.limit();
  auto coordinate_value = [&](std::size_t s) {
    if (rng() % 4 != 0) return limit.coordinate(s);
    return random_subset(rng, pool, d.ambient().bound(s));
  };
  std::vector<ProductPoint> samples(opt.samples);
  for (auto& x : samples) {
    auto len = std::max(static_cast<std::size_t>(rng() % (d.depth() + 3)), d.ambient().factors.size());
    for (std::size_t s = 0; s < len; ++s) x.prefix.push_back(coordinate_value(s));
    x.tail_value = (rng() & 1U) ? limit.tail_value : random_subset(rng, pool, d.ambient().bound(len + 64));
  }

  std::vector<char> bad(samples.size(), 0), at_limit(samples.size(), 0);
  for_each_index(opt.exec, samples.size(), [&](std::uint64_t idx) {
    const auto& x = samples[idx];
    auto where = d.locate(x);
    std::size_t hits = 0;
    bool right = false;
    for (const auto& l : labels_up_to(d, x.prefix.size() + 1)) {
      if (!box_contains(d.piece(l).box, x)) continue;
      ++hits;
      right = where && *where == l;
    }
    if (!where) {
      at_limit[idx] = 1;
      bad[idx] = (hits != 0 || !x.same_as(limit)) ? 1 : 0;
    } else {
      bad[idx] = (hits != 1 || !right) ? 1 : 0;
    }
  });
  rep.samples = samples.size();
  for (std::size_t idx = 0; idx < samples.size(); ++idx) {
    rep.limit_hits += at_limit[idx];
    if (bad[idx]) {
      ++rep.sample_failures;
      note("sample " + samples[idx].to_string() + " is not in exactly one piece");
    }
  }

  // Basic neighborhoods of the limit constrain coordinates < N; every piece
  // pinned on a prefix of length >= N must lie inside.
  for (std::size_t t = 0; t < opt.neighborhoods; ++t) {
    const std::size_t N = 1 + rng() % 3;
    BasicBox nb = BasicBox::full(d.ambient());
    for (std::size_t s = 0; s < N; ++s) {
      const auto& here = limit.coordinate(s);
      std::vector<Element> outside;
      for (auto e : pool)
        if (!here.contains(e)) outside.push_back(e);
      std::vector<Element> inside(here.elements().begin(), here.elements().end());
      nb.constrain(s, random_part(rng, inside), random_part(rng, outside));
    }
    ++rep.neighborhoods;
    if (!box_contains(nb, limit)) {
      ++rep.cofinite_failures;
      note("neighborhood " + nb.to_string() + " misses the limit point");
      continue;
    }
    for (const auto& l : labels_up_to(d, N + d.depth())) {
      auto p = d.piece(l);
      if (p.fixed_prefix < N || box_subset(p.box, nb)) continue;
      ++rep.cofinite_failures;
      note(l.to_string() + " escapes " + nb.to_string());
    }
  }
  return rep;
}

// ---------------------------------------------------------------- witnesses

TaggedPoint embed_product_into_sigma(const std::vector<Point>& xs, const std::vector<std::uint32_t>& ks) {
  require(xs.size() == ks.size(), "one bound per factor required");
  TaggedPoint out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(xs[i].size() <= ks[i], "factor " + std::to_string(i + 1) + " exceeds its bound " +
                                       std::to_string(ks[i]));
    for (auto e : xs[i].elements()) out.emplace_back(e, static_cast<std::uint32_t>(i + 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(const TaggedPoint& t) {
  std::string s = "{";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += "(" + std::to_string(t[i].first) + "," + std::to_string(t[i].second) + ")";
  }
  return s + "}";
}

RetractWitness::RetractWitness(std::uint32_t k, Point fixed) : k_(k), fixed_(std::move(fixed)) {
  require(k >= 1, "k must be at least 1");
  require(fixed_.size() + 1 == k, "need |fixed| = k-1 = " + std::to_string(k - 1) + ", got " +
                                      std::to_string(fixed_.size()));
  image_ = BasicBox::full(ProductDescriptor::single(k)).constrain(0, fixed_, {});
}

Point RetractWitness::embed(const Point& x) const {
  require(x.size() <= 1, "embedding is defined on sigma_1");
  require(x.disjoint(fixed_), "point meets the fixed set");
  return x.unite(fixed_);
}

Point RetractWitness::inverse(const Point& y) const {
  require(y.size() <= k_ && fixed_.subset_of(y), y.to_string() + " is not in the image");
  return y.minus(fixed_);
}

Point RetractWitness::retract(const Point& y) const {
  require(y.size() <= k_, y.to_string() + " is not in sigma_" + std::to_string(k_));
  return fixed_.subset_of(y) ? y : fixed_;
}

ClopenSet RetractWitness::retraction_preimage(const BasicBox& b) const {
  ClopenSet out{{}, image_.ambient};
  auto inside = box_intersect(b, image_);
  if (!box_is_empty(inside)) out.boxes.push_back(inside);
  if (box_contains(b, ProductPoint{{fixed_}, {}})) {
    for (auto& c : box_complement(image_).boxes) out.boxes.push_back(std::move(c));
  }
  return out;
}

}  // namespace sigma
