#pragma once

// Encoding chain for uniform Eberlein compacta at finite truncation:
//
//   u : B(Gamma) -> B+(Gamma x {a,b})        split into positive/negative parts
//   phi(x) = sum_i r_i x_i,  r_i = (1/3)(2/3)^i   on {0,1}^w -> [0,1]
//   x in L0  <=>  sum_n r_n N_n(x) <= 1,   N_n = #support at level n
//   L0 lies in prod_n sigma_{M_n},  M_n = floor(1/r_n)
//
// Everything is exact; truncating phi at N levels loses at most (2/3)^N.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sigma/ground.hpp"
#include "sigma/parallel.hpp"

namespace sigma {

using Rational = mpq_class;

struct SignedVector {
  std::map<Element, Rational> coords;  // zero entries are dropped

  Rational l1_norm() const;
  bool in_ball() const;       // |x_g| <= 1 and sum |x_g| <= 1
  bool nonnegative() const;
};

enum class Sign : std::uint8_t { positive = 0, negative = 1 };

struct SplitCoord {
  Element element;
  Sign sign;
  auto operator<=>(const SplitCoord&) const = default;
};

/// u(x)_{g,+} = max(0, x_g), u(x)_{g,-} = max(0, -x_g).
std::map<SplitCoord, Rational> embed_u(const SignedVector& x);

/// Identifies Gamma x {a,b} with Gamma via (g, s) -> 2g + s.
SignedVector flatten(const std::map<SplitCoord, Rational>& u);

/// r_n = (1/3)(2/3)^n
Rational level_weight(std::uint32_t n);
/// (2/3)^N, the exact tail of sum_{n >= N} r_n.
Rational truncation_tail(std::uint32_t N);

/// sum_{i < N} r_i bits[i]; bits past the end count as 0.
Rational phi(const std::vector<bool>& bits, std::uint32_t N);

struct PreimageSearch {
  std::vector<std::vector<bool>> solutions;  // lexicographic, each of length N
  bool exhaustive = true;                    // false when branch-and-bound was used
};

/// Every x in {0,1}^N with |phi_N(x) - target| <= (2/3)^N. Exhaustive
/// scan for N <= 20, depth-first branch-and-bound beyond.
PreimageSearch phi_preimage(const Rational& target, std::uint32_t N, Exec exec = Exec::serial,
                            std::uint64_t budget = kDefaultBudget);

/// Largest-first greedy bits: phi_N(x) <= target < phi_N(x) + (2/3)^N.
std::vector<bool> greedy_preimage(const Rational& target, std::uint32_t N);

/// Bits of a point of {0,1}^{w x Gamma}, keyed (element, level).
struct BinaryArray {
  std::set<std::pair<Element, std::uint32_t>> ones;
};

std::map<std::uint32_t, std::uint64_t> support_counts(const BinaryArray& x);

struct L0Verdict {
  bool member = false;
  Rational sum;  // sum_n r_n N_n(x)
};
L0Verdict in_L0(const BinaryArray& x);

struct WeightTable {
  std::vector<Rational> r;
  std::vector<std::uint64_t> M;  // floor(1 / r_n)
};
WeightTable level_bounds(std::uint32_t levels);

struct PipelinePoint {
  SignedVector point;
  BinaryArray preimage;
  std::map<Element, Rational> phi_values;  // phi_N of each coordinate's bits
  Rational l0_sum;
  bool in_L0_exact = false;
  bool within_tolerance = false;  // l0_sum <= 1 + |Gamma0| (2/3)^N
  std::map<std::uint32_t, std::uint64_t> level_counts;
  bool within_level_bounds = false;  // N_n <= M_n at every level
  /// For each level: one point of sigma_1^{M_n} whose union is the level support.
  std::map<std::uint32_t, std::vector<Point>> union_lifts;
};

struct PipelineReport {
  std::uint32_t truncation = 0;
  Rational tolerance;
  std::vector<PipelinePoint> points;
  std::vector<std::string> chain;
  bool ok() const;
};

/// Rejects points outside B+(Gamma0).
PipelineReport pipeline_check(const std::vector<SignedVector>& K, std::uint32_t N);

}  // namespace sigma
