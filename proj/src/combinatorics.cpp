#include "sigma/combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "sigma/clopen.hpp"
#include "sigma/text.hpp"

namespace sigma {

// ---------------------------------------------------------------- families

const Point& SetFamily::at(Label l) const {
  for (const auto& [label, set] : members)
    if (label == l) return set;
  throw PreconditionError("label " + std::to_string(l) + " not in family");
}

SetFamily SetFamily::parse(std::string_view input) {
  SetFamily fam;
  std::set<Label> seen;
  std::size_t line_no = 0;
  for (auto line : text::split(input, '\n')) {
    ++line_no;
    line = text::trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto colon = line.find(':');
    require(colon != std::string_view::npos,
            "line " + std::to_string(line_no) + ": expected 'label: {e1,e2}'");
    auto label = static_cast<Label>(text::parse_uint(line.substr(0, colon), "label"));
    require(seen.insert(label).second, "line " + std::to_string(line_no) + ": duplicate label " +
                                           std::to_string(label));
    fam.members.emplace_back(label, Point::parse(line.substr(colon + 1)));
  }
  return fam;
}

std::string SetFamily::to_string() const {
  std::string s;
  for (const auto& [label, set] : members) s += std::to_string(label) + ": " + set.to_string() + "\n";
  return s;
}

bool is_delta_system(const SetFamily& fam, const std::vector<Label>& labels, bool uniform,
                     Point* root) {
  std::vector<const Point*> sets;
  for (auto l : labels) sets.push_back(&fam.at(l));
  if (sets.empty()) {
    if (root) *root = Point{};
    return true;
  }
  Point r = sets.size() == 1 ? *sets[0] : sets[0]->intersect(*sets[1]);
  for (std::size_t a = 0; a < sets.size(); ++a) {
    if (uniform && sets[a]->size() != sets[0]->size()) return false;
    for (std::size_t b = a + 1; b < sets.size(); ++b)
      if (sets[a]->intersect(*sets[b]) != r) return false;
  }
  if (root) *root = r;
  return true;
}

std::uint64_t erdos_rado_bound(std::uint32_t s, std::uint32_t p) {
  std::uint64_t b = 1;
  for (std::uint32_t i = 2; i <= s; ++i) b *= i;
  for (std::uint32_t i = 0; i < s; ++i) b *= (p - 1);
  return b;
}

namespace {

using Members = std::vector<std::pair<Label, Point>>;

// Maximum set of candidates whose petals are pairwise disjoint; n <= 20.
std::uint32_t max_packing(const std::vector<Point>& petals) {
  const auto n = petals.size();
  std::vector<std::uint32_t> conflict(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && !petals[a].disjoint(petals[b])) conflict[a] |= 1U << b;
  std::uint32_t best_mask = 0;
  int best = -1;
  auto search = [&](auto&& self, std::size_t i, std::uint32_t chosen, std::uint32_t open) -> void {
    const int have = std::popcount(chosen);
    if (have + std::popcount(open) <= best) return;
    if (open == 0) {
      best = have;
      best_mask = chosen;
      return;
    }
    while (i < n && !((open >> i) & 1U)) ++i;
    // take i first so lower labels win ties
    self(self, i + 1, chosen | (1U << i), open & ~conflict[i] & ~(1U << i));
    self(self, i + 1, chosen, open & ~(1U << i));
  };
  search(search, 0, 0, n == 32 ? ~0U : ((1U << n) - 1));
  return best_mask;
}

struct Best {
  std::size_t petals = 0;
  DeltaSystem system;

  void offer(const Point& root, std::vector<Label> labels, std::optional<std::size_t> size) {
    if (labels.size() <= petals) return;
    std::sort(labels.begin(), labels.end());
    petals = labels.size();
    system = {root, std::move(labels), size};
  }
};

void exact_class(const Members& cls, std::optional<std::size_t> size, Best& best) {
  if (!cls.empty()) best.offer(cls[0].second, {cls[0].first}, size);
  std::set<Point> roots;
  for (std::size_t a = 0; a < cls.size(); ++a)
    for (std::size_t b = a + 1; b < cls.size(); ++b) roots.insert(cls[a].second.intersect(cls[b].second));
  for (const auto& R : roots) {
    std::vector<Label> labels;
    std::vector<Point> petals;
    for (const auto& [l, s] : cls) {
      if (!R.subset_of(s)) continue;
      labels.push_back(l);
      petals.push_back(s.minus(R));
    }
    if (labels.size() <= best.petals) continue;
    auto mask = max_packing(petals);
    std::vector<Label> chosen;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if ((mask >> i) & 1U) chosen.push_back(labels[i]);
    best.offer(R, std::move(chosen), size);
  }
}

void greedy_class(const Members& cls, const Point& R, std::size_t p, std::optional<std::size_t> size,
                  Best& best) {
  std::vector<Label> disjoint;
  Point used;
  for (const auto& [l, s] : cls) {
    auto petal = s.minus(R);
    if (!petal.disjoint(used)) continue;
    disjoint.push_back(l);
    used = used.unite(petal);
  }
  best.offer(R, disjoint, size);
  if (disjoint.size() >= p || used.empty()) return;
  Element pick = 0;
  std::size_t pick_count = 0;
  for (auto x : used.elements()) {
    std::size_t c = 0;
    for (const auto& [l, s] : cls) c += (s.contains(x) && !R.contains(x)) ? 1 : 0;
    if (c > pick_count) {
      pick = x;
      pick_count = c;
    }
  }
  if (pick_count < 2) return;
  Members sub;
  for (const auto& m : cls)
    if (m.second.contains(pick)) sub.push_back(m);
  greedy_class(sub, R.unite(Point{pick}), p, size, best);
}

}  // namespace

DeltaSearch extract_delta_system(const SetFamily& fam, std::size_t p, bool uniform) {
  require(p >= 2, "a Delta-system search needs p >= 2 petals");
  Members sorted = fam.members;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::map<std::size_t, Members> classes;
  if (uniform) {
    for (const auto& m : sorted) classes[m.second.size()].push_back(m);
  } else {
    classes[0] = sorted;
  }

  DeltaSearch out;
  out.exact = sorted.size() <= 20;
  Best best;
  for (const auto& [size, cls] : classes) {
    std::optional<std::size_t> petal_size;
    if (uniform) petal_size = size;
    if (out.exact) {
      exact_class(cls, petal_size, best);
    } else {
      greedy_class(cls, Point{}, p, petal_size, best);
    }
  }
  out.max_petals = best.petals;
  out.best = best.system;
  out.found = best.petals >= p;
  return out;
}

TransversalResult free_transversal(const std::map<Label, Point>& G, std::size_t size,
                                   const Point& forbidden_root) {
  TransversalResult res;
  Point covered;  // union of the chosen G's
  Point chosen;
  while (res.labels.size() < size) {
    bool picked = false;
    for (const auto& [l, g] : G) {
      if (forbidden_root.contains(l) || chosen.contains(l)) continue;
      if (covered.contains(l) || !g.disjoint(chosen)) continue;
      res.labels.push_back(l);
      chosen = chosen.unite(Point{l});
      covered = covered.unite(g);
      picked = true;
      break;
    }
    if (!picked) {
      res.blocked_at = res.labels.size();
      return res;
    }
  }
  res.ok = true;
  res.blocked_at = size;
  return res;
}

// ---------------------------------------------------------------- witness

NeighborhoodSpec NeighborhoodSpec::parse(std::string_view input) {
  NeighborhoodSpec spec;
  std::size_t line_no = 0;
  for (auto line : text::split(input, '\n')) {
    ++line_no;
    line = text::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    auto colon = line.find(':');
    require(colon != std::string_view::npos, where + "expected 'label: G=... H=...'");
    auto label = static_cast<Label>(text::parse_uint(line.substr(0, colon), "label"));
    auto rest = text::trim(line.substr(colon + 1));
    auto g_pos = rest.find("G=");
    auto h_pos = rest.find("H=");
    require(g_pos != std::string_view::npos && h_pos != std::string_view::npos && g_pos < h_pos,
            where + "expected G=... before H=...");
    auto parse_sets = [&](std::string_view s) {
      std::vector<Point> sets;
      for (auto item : text::split_top_level(text::trim(s), ',')) sets.push_back(Point::parse(item));
      return sets;
    };
    require(!spec.G.count(label), where + "duplicate label " + std::to_string(label));
    spec.G[label] = parse_sets(rest.substr(g_pos + 2, h_pos - g_pos - 2));
    spec.H[label] = parse_sets(rest.substr(h_pos + 2));
  }
  return spec;
}

void NeighborhoodSpec::validate(std::uint32_t k) const {
  require(k >= 1, "the witness uses coordinates 0 and 1, so k >= 1");
  require(!G.empty(), "empty neighborhood spec");
  for (const auto& [l, sets] : G) {
    require(H.count(l) == 1, "label " + std::to_string(l) + " has G but no H");
    require(sets.size() == k + 1 && H.at(l).size() == k + 1,
            "label " + std::to_string(l) + " needs k+1 = " + std::to_string(k + 1) + " sets in G and H");
    require(!sets[0].contains(l), "label " + std::to_string(l) + " lies in its own G_0");
    require(!H.at(l)[1].contains(l), "label " + std::to_string(l) + " lies in its own H_1");
  }
  require(H.size() == G.size(), "G and H label sets differ");
}

namespace {

// The box Phi_{lambda0}^{I_0} x Phi_F^{I_1} x prod_{j>=2} Phi^{I_j} over
// sigma_{n+1}^{k+1}, I_j = G_j^{lambda0} u U_{mu in F} H_j^mu.
BasicBox intersection_box(const NeighborhoodSpec& spec, std::uint32_t n, std::uint32_t k,
                          Label lambda0, const std::vector<Label>& F) {
  BasicBox box = BasicBox::full(ProductDescriptor::power(n + 1, k + 1));
  for (std::uint32_t j = 0; j <= k; ++j) {
    Point I = spec.G.at(lambda0)[j];
    for (auto mu : F) I = I.unite(spec.H.at(mu)[j]);
    Point forced;
    if (j == 0) forced = Point{lambda0};
    if (j == 1) forced = Point(std::vector<Element>(F.begin(), F.end()));
    box.constrain(j, forced, I);
  }
  return box;
}

}  // namespace

CommonPointWitness common_point_witness(const NeighborhoodSpec& spec, std::uint32_t n,
                                        std::uint32_t k, Exec exec, std::uint64_t budget) {
  spec.validate(k);
  CommonPointWitness w;

  SetFamily h1;
  for (const auto& [mu, sets] : spec.H) h1.members.emplace_back(mu, sets[1]);
  auto delta = h1.members.size() >= 2 ? extract_delta_system(h1, 2, /*uniform=*/false)
                                      : DeltaSearch{};
  std::vector<Label> M1 = delta.best.petal_labels;
  if (h1.members.size() == 1) M1 = {h1.members[0].first};
  w.root = delta.best.root;

  std::map<Label, Point> restricted;
  for (auto mu : M1)
    if (!w.root.contains(mu)) restricted.emplace(mu, spec.H.at(mu)[1]);
  auto trans = free_transversal(restricted, restricted.size(), Point{});
  w.M = trans.labels;
  if (w.M.size() < n + 1) {
    w.failed_stage = "M: only " + std::to_string(w.M.size()) + " mutually free labels, need " +
                     std::to_string(n + 1);
    return w;
  }

  Point blocked;
  for (auto mu : w.M) blocked = blocked.unite(spec.H.at(mu)[0]);
  bool have_lambda0 = false;
  for (const auto& [l, sets] : spec.G)
    if (!blocked.contains(l)) {
      w.lambda0 = l;
      have_lambda0 = true;
      break;
    }
  if (!have_lambda0) {
    w.failed_stage = "lambda0: every label lies in some H_0 of M";
    return w;
  }

  const auto& g1 = spec.G.at(w.lambda0)[1];
  for (auto mu : w.M)
    if (!g1.contains(mu)) w.S.push_back(mu);
  std::sort(w.S.begin(), w.S.end());
  if (w.S.size() < n + 1) {
    w.failed_stage = "S: |S| = " + std::to_string(w.S.size()) + " < n+1 = " + std::to_string(n + 1);
    return w;
  }

  const auto subsets = binomial(w.S.size(), n + 1);
  if (subsets > budget) throw BudgetExceeded(subsets, budget);
  // subsets of S of size n+1, indexed lexicographically
  std::vector<std::vector<Label>> Fs;
  std::vector<Label> cur;
  auto gen = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == n + 1) {
      Fs.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < w.S.size(); ++i) {
      cur.push_back(w.S[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  gen(gen, 0);

  std::vector<char> empty(Fs.size(), 0), missing(Fs.size(), 0);
  for_each_index(exec, Fs.size(), [&](std::uint64_t i) {
    auto box = intersection_box(spec, n, k, w.lambda0, Fs[i]);
    empty[i] = box_is_empty(box) ? 1 : 0;
    ProductPoint member;
    member.prefix.assign(k + 1, Point{});
    member.prefix[0] = Point{w.lambda0};
    member.prefix[1] = Point(std::vector<Element>(Fs[i].begin(), Fs[i].end()));
    missing[i] = box_contains(box, member) ? 0 : 1;
  });
  w.subsets_checked = Fs.size();
  w.boxes_nonempty = std::none_of(empty.begin(), empty.end(), [](char c) { return c != 0; });
  w.members_verified = std::none_of(missing.begin(), missing.end(), [](char c) { return c != 0; });
  w.ok = w.boxes_nonempty && w.members_verified;
  if (!w.ok) w.failed_stage = "checker";
  return w;
}

EmptinessCertificate neighborhood_emptiness_bound(const std::map<Label, Point>& assignments,
                                                  const std::vector<Label>& F, std::uint32_t n) {
  Point seen;
  for (const auto& [l, s] : assignments) {
    require(!s.empty(), "S^" + std::to_string(l) + " is empty");
    require(s.disjoint(seen), "S^" + std::to_string(l) + " overlaps an earlier S");
    seen = seen.unite(s);
  }
  std::vector<Label> labels = F;
  if (labels.empty())
    for (const auto& [l, s] : assignments) labels.push_back(l);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  EmptinessCertificate c;
  c.n = n;
  for (auto l : labels) {
    auto it = assignments.find(l);
    require(it != assignments.end(), "label " + std::to_string(l) + " has no S assigned");
    c.min_cardinality += it->second.size();
  }
  c.forced = c.min_cardinality > n;
  return c;
}

}  // namespace sigma
