#pragma once

// Delta-systems (sunflowers) and the finite combinatorial constructions used
// to rule out embeddings of sigma_{n+1}(Lambda)^{k+1}. "Uncountable"
// hypotheses become explicit finite thresholds; when a finite instance runs
// dry the functions report the stage that failed instead of guessing.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sigma/ground.hpp"
#include "sigma/parallel.hpp"

namespace sigma {

using Label = Element;

struct SetFamily {
  std::vector<std::pair<Label, Point>> members;  // distinct labels

  const Point& at(Label l) const;
  /// One member per line, "label: {e1,e2}"; blank lines and '#' comments skipped.
  static SetFamily parse(std::string_view text);
  std::string to_string() const;
};

struct DeltaSystem {
  Point root;
  std::vector<Label> petal_labels;   // ascending
  std::optional<std::size_t> petal_size;  // common member cardinality when uniform
};

/// Pairwise intersections all equal one root (and, if uniform, one size).
bool is_delta_system(const SetFamily& fam, const std::vector<Label>& labels, bool uniform,
                     Point* root = nullptr);

struct DeltaSearch {
  bool found = false;      // best has >= p petals
  bool exact = true;       // false when the greedy Erdos-Rado path ran
  std::size_t max_petals = 0;  // certificate: largest petal count found
  DeltaSystem best;
};

/// Largest Delta-system in the family. Exact for at most 20 members;
/// beyond that, greedy bucketing (maximal disjoint petals, else recurse on
/// the most frequent element of their union), which succeeds whenever a
/// uniform class has more than s!(p-1)^s distinct s-sets. With `uniform`
/// all petals share one cardinality.
DeltaSearch extract_delta_system(const SetFamily& fam, std::size_t p, bool uniform = true);

/// s!(p-1)^s
std::uint64_t erdos_rado_bound(std::uint32_t s, std::uint32_t p);

struct TransversalResult {
  bool ok = false;
  std::vector<Label> labels;     // chosen so far, in choice order
  std::size_t blocked_at = 0;    // index of the first choice that failed
};

/// Greedy in label order: lambda_p is outside the earlier G's and G_{lambda_p}
/// avoids the earlier labels. Labels in forbidden_root are never chosen.
TransversalResult free_transversal(const std::map<Label, Point>& G, std::size_t size,
                                   const Point& forbidden_root);

/// Basic neighborhoods of e_0^lambda and e_1^mu in sigma_{n+1}(Lambda)^{k+1}:
///   Phi_{lambda}^{G_0} x Phi^{G_1} x ... x Phi^{G_k}   and
///   Phi^{H_0} x Phi_{mu}^{H_1} x ... x Phi^{H_k}.
struct NeighborhoodSpec {
  std::map<Label, std::vector<Point>> G;
  std::map<Label, std::vector<Point>> H;

  /// Lines "label: G={..},{..} H={..},{..}" with k+1 sets each.
  static NeighborhoodSpec parse(std::string_view text);
  void validate(std::uint32_t k) const;
};

struct CommonPointWitness {
  bool ok = false;
  std::string failed_stage;  // empty on success
  Point root;                // Delta-system root of the H_1 family
  std::vector<Label> M;
  Label lambda0 = 0;
  std::vector<Label> S;
  std::uint64_t subsets_checked = 0;
  bool boxes_nonempty = false;   // symbolic check
  bool members_verified = false; // explicit point ({lambda0}, F, {}, ...) in every box
};

CommonPointWitness common_point_witness(const NeighborhoodSpec& spec, std::uint32_t n,
                                        std::uint32_t k, Exec exec = Exec::serial,
                                        std::uint64_t budget = kDefaultBudget);

struct EmptinessCertificate {
  bool forced = false;                 // intersection of the A_lambda is empty
  std::uint64_t min_cardinality = 0;   // sum of |S^lambda| over F
  std::uint32_t n = 0;
};

/// Any y[j] containing every S^lambda (lambda in F) has at least
/// sum |S^lambda| elements; beyond n it cannot lie in sigma_n. F empty means
/// every label.
EmptinessCertificate neighborhood_emptiness_bound(const std::map<Label, Point>& assignments,
                                                  const std::vector<Label>& F, std::uint32_t n);

}  // namespace sigma
