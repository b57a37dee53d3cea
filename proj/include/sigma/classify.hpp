#pragma once

// Homeomorphism classification of countable products sigma_tau(Gamma),
// normal forms, embedding profiles and Cantor-Bendixson invariants for the
// countable case.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sigma/ground.hpp"

namespace sigma {

/// sigma_i^w x prod_{n>i} sigma_n^{tau_n}. When infinitely many finite
/// exponents survive (j = w, i < w) they end in a constant tail c > 0 from
/// index tail_from on.
struct NormalForm {
  ExtNat i;
  std::map<std::size_t, std::uint64_t> upper;  // n > i, positive exponents
  std::uint64_t tail = 0;
  std::size_t tail_from = 0;  // 0 when tail == 0

  ExtNat j() const;
  bool operator==(const NormalForm&) const = default;
  std::string to_string() const;
};

NormalForm normal_form(const TauSequence& tau);

enum class Outcome { homeomorphic, not_homeomorphic, open };
enum class GammaKind { uncountable, countable };

std::string to_string(Outcome o);
GammaKind parse_gamma(std::string_view text);

struct Verdict {
  Outcome outcome;
  std::string reason;    // rule citation
  std::string question;  // set for OPEN only
};

Verdict classify(const TauSequence& a, const TauSequence& b,
                 GammaKind gamma = GammaKind::uncountable);

// ---------------------------------------------------------------- CB engine

/// Formal union of products prod_s sigma_{d_s}(w), one degree vector per term.
struct SpaceExpression {
  std::vector<std::uint32_t> bounds;
  std::set<std::vector<std::uint32_t>> terms;

  static SpaceExpression full(std::vector<std::uint32_t> ks);
  bool empty() const { return terms.empty(); }
  /// Point-level membership: some term has |x_s| <= d_s everywhere.
  bool contains(const std::vector<std::uint32_t>& sizes) const;
};

/// (X x Y)' = X' x Y u X x Y',  sigma_n' = sigma_{n-1},  sigma_0' = empty.
SpaceExpression cb_derivative(const SpaceExpression& e);

struct CbInvariants {
  std::uint64_t index = 0;             // first empty derivative
  std::uint64_t last_cardinality = 0;  // points of the last nonempty one
};
CbInvariants cb_invariants(const std::vector<std::uint32_t>& ks);

// ---------------------------------------------------------------- profiles

/// Largest k with sigma_n^{k + sum_{r>n} tau_r} embedding in a clopen set
/// that misses sigma_{n+1}; for n <= i every power embeds.
ExtNat max_power_embeddable(std::size_t n, const NormalForm& nf);

/// Values for n = 1..values.size(), then `beyond` for every larger n.
struct EmbeddingProfile {
  std::vector<ExtNat> values;
  ExtNat beyond;
};

EmbeddingProfile embedding_profile(const NormalForm& nf, std::size_t length);

/// Reconstructs the normal form by downward induction. Throws
/// ProfileError carrying the first inconsistent index.
NormalForm recover_tau(const EmbeddingProfile& profile);

struct ProfileError : PreconditionError {
  ProfileError(std::size_t index, const std::string& what)
      : PreconditionError(what), index(index) {}
  std::size_t index;
};

}  // namespace sigma
