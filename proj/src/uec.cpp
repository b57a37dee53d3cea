#include "sigma/uec.hpp"

#include <algorithm>

#include "sigma/averaging.hpp"

namespace sigma {

namespace {

mpz_class pow_ui(unsigned long base, unsigned long exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

// Integer weight of bit i scaled by 3^N: r_i 3^N = 2^i 3^(N-1-i).
std::uint64_t scaled_weight(std::uint32_t i, std::uint32_t N) {
  std::uint64_t w = 1;
  for (std::uint32_t t = 0; t < i; ++t) w *= 2;
  for (std::uint32_t t = i + 1; t < N; ++t) w *= 3;
  return w;
}

}  // namespace

Rational SignedVector::l1_norm() const {
  Rational s = 0;
  for (const auto& [g, v] : coords) s += abs(v);
  return s;
}

bool SignedVector::in_ball() const {
  for (const auto& [g, v] : coords)
    if (abs(v) > 1) return false;
  return l1_norm() <= 1;
}

bool SignedVector::nonnegative() const {
  return std::all_of(coords.begin(), coords.end(), [](const auto& kv) { return sgn(kv.second) >= 0; });
}

std::map<SplitCoord, Rational> embed_u(const SignedVector& x) {
  require(x.in_ball(), "point outside B(Gamma): l1 norm " + x.l1_norm().get_str());
  std::map<SplitCoord, Rational> u;
  for (const auto& [g, v] : x.coords) {
    if (sgn(v) > 0) u.emplace(SplitCoord{g, Sign::positive}, v);
    if (sgn(v) < 0) u.emplace(SplitCoord{g, Sign::negative}, -v);
  }
  return u;
}

SignedVector flatten(const std::map<SplitCoord, Rational>& u) {
  SignedVector out;
  for (const auto& [c, v] : u)
    if (sgn(v) != 0) out.coords.emplace(2 * c.element + static_cast<Element>(c.sign), v);
  return out;
}

Rational level_weight(std::uint32_t n) {
  Rational r(mpz_class(pow_ui(2, n)), mpz_class(pow_ui(3, n + 1)));
  r.canonicalize();
  return r;
}

Rational truncation_tail(std::uint32_t N) {
  Rational r(mpz_class(pow_ui(2, N)), mpz_class(pow_ui(3, N)));
  r.canonicalize();
  return r;
}

Rational phi(const std::vector<bool>& bits, std::uint32_t N) {
  Rational s = 0;
  for (std::uint32_t i = 0; i < N && i < bits.size(); ++i)
    if (bits[i]) s += level_weight(i);
  return s;
}

std::vector<bool> greedy_preimage(const Rational& target, std::uint32_t N) {
  std::vector<bool> bits(N, false);
  Rational acc = 0;
  for (std::uint32_t i = 0; i < N; ++i) {
    auto w = level_weight(i);
    if (acc + w <= target) {
      acc += w;
      bits[i] = true;
    }
  }
  return bits;
}

PreimageSearch phi_preimage(const Rational& target, std::uint32_t N, Exec exec,
                            std::uint64_t budget) {
  require(N >= 1, "truncation N must be at least 1");
  require(N <= 40, "truncation N above 40 is not supported");
  require(sgn(target) >= 0 && target <= 1, "target " + target.get_str() + " outside [0,1]");

  // In units of 3^-N: phi_N(x) = S(x) / 3^N with integer S, and the
  // acceptance window is [t 3^N - 2^N, t 3^N + 2^N].
  const mpz_class scale = pow_ui(3, N);
  const mpz_class slack = pow_ui(2, N);
  const mpz_class num = target.get_num() * scale;
  const mpz_class den = target.get_den();
  mpz_class lo_z, hi_z;
  mpz_cdiv_q(lo_z.get_mpz_t(), mpz_class(num - slack * den).get_mpz_t(), den.get_mpz_t());
  mpz_fdiv_q(hi_z.get_mpz_t(), mpz_class(num + slack * den).get_mpz_t(), den.get_mpz_t());
  if (lo_z < 0) lo_z = 0;
  // S(x) <= 3^N - 2^N < 2^64 for N <= 40
  if (hi_z > scale) hi_z = scale;
  const std::uint64_t lo = lo_z.get_ui();
  const std::uint64_t hi = hi_z.get_ui();

  std::vector<std::uint64_t> w(N);
  for (std::uint32_t i = 0; i < N; ++i) w[i] = scaled_weight(i, N);

  auto to_bits = [N](std::uint64_t code) {
    std::vector<bool> bits(N);
    for (std::uint32_t i = 0; i < N; ++i) bits[i] = (code >> (N - 1 - i)) & 1U;
    return bits;
  };

  PreimageSearch out;
  if (N <= 20) {
    // code's most significant bit is bit 0, so ascending codes are
    // lexicographic bit vectors
    const std::uint64_t total = std::uint64_t{1} << N;
    std::vector<char> hit(total, 0);
    for_each_index(exec, total, [&](std::uint64_t code) {
      std::uint64_t s = 0;
      for (std::uint32_t i = 0; i < N; ++i)
        if ((code >> (N - 1 - i)) & 1U) s += w[i];
      hit[code] = (s >= lo && s <= hi) ? 1 : 0;
    });
    for (std::uint64_t code = 0; code < total; ++code) {
      if (!hit[code]) continue;
      if (out.solutions.size() >= budget) throw BudgetExceeded(out.solutions.size() + 1, budget);
      out.solutions.push_back(to_bits(code));
    }
    return out;
  }

  out.exhaustive = false;
  std::vector<std::uint64_t> suffix(N + 1, 0);  // max reachable from bit i on
  for (std::uint32_t i = N; i-- > 0;) suffix[i] = suffix[i + 1] + w[i];
  std::vector<bool> cur(N, false);
  auto dfs = [&](auto&& self, std::uint32_t i, std::uint64_t s) -> void {
    if (s > hi || s + suffix[i] < lo) return;
    if (i == N) {
      if (out.solutions.size() >= budget) throw BudgetExceeded(out.solutions.size() + 1, budget);
      out.solutions.push_back(cur);
      return;
    }
    cur[i] = false;
    self(self, i + 1, s);
    cur[i] = true;
    self(self, i + 1, s + w[i]);
    cur[i] = false;
  };
  dfs(dfs, 0, 0);
  return out;
}

std::map<std::uint32_t, std::uint64_t> support_counts(const BinaryArray& x) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (const auto& [g, level] : x.ones) ++counts[level];
  return counts;
}

L0Verdict in_L0(const BinaryArray& x) {
  L0Verdict v;
  v.sum = 0;
  for (const auto& [level, count] : support_counts(x)) v.sum += level_weight(level) * count;
  v.member = v.sum <= 1;
  return v;
}

WeightTable level_bounds(std::uint32_t levels) {
  require(levels >= 1, "levels must be at least 1");
  WeightTable t;
  for (std::uint32_t n = 0; n < levels; ++n) {
    auto r = level_weight(n);
    t.r.push_back(r);
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_den_mpz_t(), r.get_num_mpz_t());
    t.M.push_back(q.get_ui());
  }
  return t;
}

bool PipelineReport::ok() const {
  return std::all_of(points.begin(), points.end(), [](const PipelinePoint& p) {
    return p.within_tolerance && p.within_level_bounds;
  });
}

PipelineReport pipeline_check(const std::vector<SignedVector>& K, std::uint32_t N) {
  require(N >= 1 && N <= 40, "truncation N must lie in [1, 40]");
  PipelineReport rep;
  rep.truncation = N;
  const auto tail = truncation_tail(N);

  std::set<Element> ground;
  for (const auto& x : K)
    for (const auto& [g, v] : x.coords) ground.insert(g);
  rep.tolerance = tail * static_cast<unsigned long>(std::max<std::size_t>(ground.size(), 1));

  for (const auto& x : K) {
    require(x.nonnegative() && x.in_ball(), "point outside B+(Gamma)");
    PipelinePoint pp;
    pp.point = x;
    for (const auto& [g, v] : x.coords) {
      auto bits = greedy_preimage(v, N);
      auto value = phi(bits, N);
      if (value > v || v - value > tail) throw std::logic_error("greedy preimage left the window");
      pp.phi_values.emplace(g, value);
      for (std::uint32_t i = 0; i < N; ++i)
        if (bits[i]) pp.preimage.ones.emplace(g, i);
    }
    auto verdict = in_L0(pp.preimage);
    pp.l0_sum = verdict.sum;
    pp.in_L0_exact = verdict.member;
    pp.within_tolerance = verdict.sum <= 1 + rep.tolerance;
    pp.level_counts = support_counts(pp.preimage);
    auto bounds = level_bounds(N);
    pp.within_level_bounds = true;
    for (const auto& [level, count] : pp.level_counts) {
      if (count > bounds.M[level]) pp.within_level_bounds = false;
    }
    for (const auto& [level, count] : pp.level_counts) {
      std::vector<Element> support;
      for (const auto& [g, l] : pp.preimage.ones)
        if (l == level) support.push_back(g);
      Point y(std::move(support));
      auto M = static_cast<std::uint32_t>(std::max<std::uint64_t>(bounds.M[level], y.size()));
      auto lift = canonical_lift(y, M);
      if (apply_union(lift) != y) throw std::logic_error("union of the lift differs from its level");
      pp.union_lifts.emplace(level, std::move(lift));
    }
    rep.points.push_back(std::move(pp));
  }

  rep.chain = {
      "sigma_1^w (levels < " + std::to_string(N) + ") --union per level--> prod_n sigma_{M_n}",
      "prod_n sigma_{M_n} contains L0 = {x : sum_n r_n N_n(x) <= 1}",
      "L' = (phi^Gamma)^{-1}(K) inside L0",
      "phi^Gamma : L' --> K, coordinatewise phi truncated at N = " + std::to_string(N),
  };
  return rep;
}

}  // namespace sigma
