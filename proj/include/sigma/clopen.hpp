#pragma once

// Basic clopen boxes Phi_F^G over products of sigma factors, and finite
// unions of them. Emptiness and reduction are decided symbolically, so they
// hold for an infinite ground set; enumeration appears only in tests.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sigma/ground.hpp"
#include "sigma/parallel.hpp"

namespace sigma {

/// {y : F subset y, y disjoint from G} on one coordinate.
struct Constraint {
  Point F;
  Point G;
  bool operator==(const Constraint&) const = default;
};

/// Product of per-coordinate constraints; absent coordinates are the full
/// factor.
struct BasicBox {
  std::map<std::size_t, Constraint> constraints;
  ProductDescriptor ambient;

  static BasicBox full(ProductDescriptor ambient) { return {{}, std::move(ambient)}; }
  BasicBox& constrain(std::size_t s, Point F, Point G);

  bool operator==(const BasicBox&) const = default;

  /// "[0: F={1} G={2}; 3: F={} G={4}] @ 2 1^w"
  std::string to_string() const;
  static BasicBox parse(std::string_view text);
};

struct ClopenSet {
  std::vector<BasicBox> boxes;  // empty sequence = empty set
  ProductDescriptor ambient;

  bool contains(const ProductPoint& x) const;
  std::string to_string() const;
};

bool box_is_empty(const BasicBox& b);
bool box_contains(const BasicBox& b, const ProductPoint& x);
BasicBox box_intersect(const BasicBox& a, const BasicBox& b);

/// Complement as a union of boxes: one box per F-element that may be
/// missing and one per G-element that may be present.
ClopenSet box_complement(const BasicBox& b);

/// a subset b, decided symbolically through box_complement.
bool box_subset(const BasicBox& a, const BasicBox& b);

/// Homeomorphism type of a nonempty box: a constrained coordinate s
/// becomes sigma_{n_s - |F_s|} through y -> y \ F_s.
struct BoxReduction {
  ProductDescriptor type;
  std::map<std::size_t, Point> removed;  // coordinate -> F_s
  std::map<std::size_t, Point> avoided;  // coordinate -> F_s u G_s

  /// Witness map y_s -> y_s \ F_s. The image is a point of `type` over the
  /// ground minus the avoided elements at each constrained coordinate.
  ProductPoint forward(const ProductPoint& x) const;
  ProductPoint backward(const ProductPoint& z) const;
};
BoxReduction box_reduce(const BasicBox& b);

/// Boxes over sigma_1^k whose union is p^{-1}(b) for p(x_1..x_k) = union.
ClopenSet preimage_under_union(const BasicBox& b, std::uint32_t k);

/// Number of points of sigma_1({0..ground-1})^k where membership in the
/// preimage disagrees with membership of the union in b.
std::uint64_t preimage_mismatches(const BasicBox& b, const ClopenSet& pre, std::uint32_t k,
                                  std::uint32_t ground, Exec exec,
                                  std::uint64_t budget = kDefaultBudget);

struct CoverWitness {
  std::size_t index;
  BasicBox witness;  // Phi_{}^{G^1} x ... x Phi_{}^{G^k}
  BoxReduction reduction;
};

/// Picks the first member of the union containing the all-empty point.
CoverWitness union_membership_cover(const ClopenSet& target, const ProductDescriptor& probe);

}  // namespace sigma
