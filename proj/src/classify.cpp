#include "sigma/classify.hpp"

#include <algorithm>
#include <stdexcept>

namespace sigma {

ExtNat NormalForm::j() const {
  if (i.is_omega() || tail > 0) return ExtNat::omega();
  if (upper.empty()) return i;
  return std::max(i, ExtNat(upper.rbegin()->first));
}

std::string NormalForm::to_string() const {
  std::string s = "i=" + i.to_string();
  if (!upper.empty()) {
    s += " upper={";
    bool first = true;
    for (const auto& [n, e] : upper) {
      if (!first) s += ",";
      s += std::to_string(n) + ":" + std::to_string(e);
      first = false;
    }
    s += "}";
  }
  if (tail > 0) s += " tail=" + std::to_string(tail) + " from " + std::to_string(tail_from);
  return s;
}

NormalForm normal_form(const TauSequence& tau) {
  NormalForm nf;
  nf.i = i_of(tau);
  if (nf.i.is_omega()) return nf;
  const auto i = nf.i.value();
  const auto& prefix = tau.prefix();
  for (std::size_t n = i + 1; n <= prefix.size(); ++n) {
    auto v = prefix[n - 1].value();  // finite: n > i
    if (v > 0) nf.upper.emplace(n, v);
  }
  nf.tail = tau.tail().value();
  if (nf.tail > 0) nf.tail_from = prefix.size() + 1;
  return nf;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::homeomorphic: return "HOMEOMORPHIC";
    case Outcome::not_homeomorphic: return "NOT_HOMEOMORPHIC";
    case Outcome::open: return "OPEN";
  }
  return "?";
}

GammaKind parse_gamma(std::string_view text) {
  if (text == "uncountable") return GammaKind::uncountable;
  if (text == "countable") return GammaKind::countable;
  throw PreconditionError("gamma must be 'uncountable' or 'countable', got '" + std::string(text) + "'");
}

namespace {

constexpr const char* kOpenQuestion =
    "unresolved: both products have j = w, i < w for at least one of them, and the "
    "sequences differ at some n >= i; no known invariant separates them nor is a "
    "homeomorphism known (smallest instance: prod_{n>=1} sigma_n versus prod_{n>=2} sigma_n)";

Verdict countable_verdict(const TauSequence& a, const TauSequence& b) {
  // A product with infinitely many non-trivial factors is a Cantor set; a
  // finite one is scattered with CB index 1 + sum n tau_n and top rank 1.
  auto finite = [](const TauSequence& t) { return i_of(t) == ExtNat(0) && j_of(t).is_finite(); };
  auto index = [](const TauSequence& t) {
    std::uint64_t s = 1;
    for (std::size_t n = 1; n <= t.prefix().size(); ++n) s += n * t.at(n).value();
    return s;
  };
  const bool fa = finite(a), fb = finite(b);
  if (fa && fb) {
    bool same = index(a) == index(b);
    return {same ? Outcome::homeomorphic : Outcome::not_homeomorphic, "countable:CB", ""};
  }
  if (!fa && !fb) return {Outcome::homeomorphic, "countable:perfect", ""};
  return {Outcome::not_homeomorphic, "countable:scattered-vs-perfect", ""};
}

}  // namespace

Verdict classify(const TauSequence& a, const TauSequence& b, GammaKind gamma) {
  if (gamma == GammaKind::countable) return countable_verdict(a, b);

  const auto na = normal_form(a), nb = normal_form(b);
  const bool same = na == nb;
  if (j_of(a).is_finite() || j_of(b).is_finite())
    return {same ? Outcome::homeomorphic : Outcome::not_homeomorphic, "Thm1(1)", ""};
  if (na.i.is_omega() && nb.i.is_omega()) return {Outcome::homeomorphic, "Thm1(2)", ""};
  if (same) return {Outcome::homeomorphic, "absorption", ""};
  return {Outcome::open, "Problem", kOpenQuestion};
}

// ---------------------------------------------------------------- CB engine

SpaceExpression SpaceExpression::full(std::vector<std::uint32_t> ks) {
  SpaceExpression e;
  e.bounds = ks;
  e.terms.insert(std::move(ks));
  return e;
}

bool SpaceExpression::contains(const std::vector<std::uint32_t>& sizes) const {
  require(sizes.size() == bounds.size(), "size vector does not match the coordinates");
  for (const auto& t : terms) {
    bool inside = true;
    for (std::size_t s = 0; s < t.size() && inside; ++s) inside = sizes[s] <= t[s];
    if (inside) return true;
  }
  return false;
}

SpaceExpression cb_derivative(const SpaceExpression& e) {
  SpaceExpression d;
  d.bounds = e.bounds;
  for (const auto& t : e.terms) {
    for (std::size_t s = 0; s < t.size(); ++s) {
      if (t[s] == 0) continue;
      auto v = t;
      --v[s];
      d.terms.insert(std::move(v));
    }
  }
  return d;
}

CbInvariants cb_invariants(const std::vector<std::uint32_t>& ks) {
  require(!ks.empty(), "cb needs at least one factor");
  CbInvariants inv;
  auto e = SpaceExpression::full(ks);
  SpaceExpression last;
  while (!e.empty()) {
    last = e;
    e = cb_derivative(e);
    ++inv.index;
  }
  // The last nonempty derivative is prod sigma_0, a single point.
  if (last.terms.size() != 1 ||
      std::any_of(last.terms.begin()->begin(), last.terms.begin()->end(),
                  [](std::uint32_t d) { return d != 0; }))
    throw std::logic_error("last nonempty derivative is not a point");
  inv.last_cardinality = 1;
  return inv;
}

// ---------------------------------------------------------------- profiles

ExtNat max_power_embeddable(std::size_t n, const NormalForm& nf) {
  if (ExtNat(n) <= nf.i || nf.tail > 0) return ExtNat::omega();
  std::uint64_t s = 0;
  for (auto it = nf.upper.lower_bound(n); it != nf.upper.end(); ++it) s += it->second;
  return ExtNat(s);
}

EmbeddingProfile embedding_profile(const NormalForm& nf, std::size_t length) {
  const auto j = nf.j();
  require(j.is_omega() || j <= ExtNat(length),
          "profile length " + std::to_string(length) + " is below j = " + j.to_string());
  EmbeddingProfile p;
  for (std::size_t n = 1; n <= length; ++n) p.values.push_back(max_power_embeddable(n, nf));
  p.beyond = max_power_embeddable(length + 1, nf);
  return p;
}

NormalForm recover_tau(const EmbeddingProfile& profile) {
  const auto L = profile.values.size();
  auto at = [&](std::size_t n) { return n <= L ? profile.values[n - 1] : profile.beyond; };
  for (std::size_t n = 1; n <= L; ++n)
    if (at(n) < at(n + 1))
      throw ProfileError(n + 1, "profile increases at n = " + std::to_string(n + 1));

  NormalForm nf;
  if (profile.beyond.is_omega()) {
    nf.i = ExtNat::omega();
    return nf;
  }
  if (profile.beyond != ExtNat(0))
    throw ProfileError(L + 1, "profile must vanish beyond j, got " + profile.beyond.to_string());

  std::size_t i = 0;
  while (i < L && at(i + 1).is_omega()) ++i;
  nf.i = ExtNat(i);
  for (std::size_t n = L; n > i; --n) {
    auto tau_n = at(n).value() - at(n + 1).value();
    if (tau_n > 0) nf.upper.emplace(n, tau_n);
  }
  return nf;
}

}  // namespace sigma
