#pragma once

// Ground elements, finite-set points, product descriptors and tau sequences.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigma/error.hpp"

namespace sigma {

using Element = std::uint32_t;

/// A value in {0, 1, 2, ..., w}. w compares above every integer and
/// absorbs addition.
class ExtNat {
 public:
  constexpr ExtNat() = default;
  constexpr ExtNat(std::uint64_t v) : v_(v) {}  // NOLINT

  static constexpr ExtNat omega() {
    ExtNat w;
    w.v_ = kOmegaRep;
    return w;
  }

  constexpr bool is_omega() const { return v_ == kOmegaRep; }
  constexpr bool is_finite() const { return !is_omega(); }

  std::uint64_t value() const {
    require(is_finite(), "ExtNat::value called on w");
    return v_;
  }

  constexpr auto operator<=>(const ExtNat&) const = default;

  friend constexpr ExtNat operator+(ExtNat a, ExtNat b) {
    if (a.is_omega() || b.is_omega()) return omega();
    return ExtNat(a.v_ + b.v_);
  }

  std::string to_string() const;
  /// Accepts decimal digits or "w".
  static ExtNat parse(std::string_view text);

 private:
  static constexpr std::uint64_t kOmegaRep = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t v_ = 0;
};

/// A finite subset of the ground set, stored sorted and duplicate-free.
class Point {
 public:
  Point() = default;
  Point(std::initializer_list<Element> elems);
  explicit Point(std::vector<Element> elems);

  std::span<const Element> elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  bool contains(Element e) const;
  bool subset_of(const Point& other) const;
  bool disjoint(const Point& other) const;

  Point unite(const Point& other) const;
  Point intersect(const Point& other) const;
  Point minus(const Point& other) const;

  auto operator<=>(const Point&) const = default;

  /// "{0,3,7}"
  std::string to_string() const;
  static Point parse(std::string_view text);

 private:
  std::vector<Element> elems_;
};

struct SigmaFactor {
  std::uint32_t n = 0;
  auto operator<=>(const SigmaFactor&) const = default;
};

/// A finite product of sigma factors, optionally followed by one factor
/// repeated w times.
struct ProductDescriptor {
  std::vector<SigmaFactor> factors;
  std::optional<SigmaFactor> omega_tail;

  /// Cardinality bound of coordinate s.
  std::uint32_t bound(std::size_t s) const;
  bool has_coordinate(std::size_t s) const {
    return s < factors.size() || omega_tail.has_value();
  }

  /// Drops one-point factors and folds explicit factors equal to the tail
  /// factor into the tail. Two descriptors with equal simplified forms are
  /// homeomorphic products.
  ProductDescriptor simplified() const;

  bool operator==(const ProductDescriptor&) const = default;

  /// "2 1^w"; the empty product prints as "-".
  std::string to_string() const;
  static ProductDescriptor parse(std::string_view text);

  static ProductDescriptor single(std::uint32_t n) { return {{SigmaFactor{n}}, std::nullopt}; }
  static ProductDescriptor power(std::uint32_t n, std::size_t k) {
    return {std::vector<SigmaFactor>(k, SigmaFactor{n}), std::nullopt};
  }
};

/// Eventually-constant point of a product: coordinates past the prefix all
/// equal tail_value.
struct ProductPoint {
  std::vector<Point> prefix;
  Point tail_value;

  const Point& coordinate(std::size_t s) const {
    return s < prefix.size() ? prefix[s] : tail_value;
  }
  bool fits(const ProductDescriptor& desc) const;
  /// Same point with trailing prefix entries equal to tail_value dropped.
  ProductPoint normalized() const;
  bool same_as(const ProductPoint& other) const { return normalized() == other.normalized(); }

  auto operator<=>(const ProductPoint&) const = default;
  std::string to_string() const;
};

/// (tau_n)_{n>=1} with values in {0..w}; tau_n = prefix[n-1] for n <= prefix
/// length, tail beyond. Stored canonically: trailing prefix entries equal to
/// the tail are dropped.
class TauSequence {
 public:
  TauSequence() = default;
  TauSequence(std::vector<ExtNat> prefix, ExtNat tail);

  ExtNat at(std::size_t n) const;  // n >= 1
  const std::vector<ExtNat>& prefix() const { return prefix_; }
  ExtNat tail() const { return tail_; }

  /// Explicit (index, value) entries of the canonical form.
  std::vector<std::pair<std::size_t, ExtNat>> entries() const;

  bool operator==(const TauSequence&) const = default;

  /// "w,w,2 tail=0"
  std::string to_string() const;
  /// Grammar: entry(,entry)* [tail=0|c|w]; empty text is the zero sequence.
  static TauSequence parse(std::string_view text);

 private:
  std::vector<ExtNat> prefix_;
  ExtNat tail_{0};
};

/// sup{n : tau_n = w}; 0 when there is none.
ExtNat i_of(const TauSequence& tau);
/// sup{n : tau_n > 0}; 0 for the zero sequence.
ExtNat j_of(const TauSequence& tau);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// All subsets of {0..ground-1} of size <= n: by size, then lexicographic.
std::vector<Point> subsets_up_to(std::uint32_t ground, std::uint32_t n);

/// Random-access enumeration of the eventually-constant points of a
/// descriptor over ground {0..ground-1}. An w-tail is materialized up to
/// `depth` coordinates with tail_value = {} beyond. The last coordinate
/// varies fastest.
class ProductEnumerator {
 public:
  ProductEnumerator(const ProductDescriptor& desc, std::uint32_t ground, std::size_t depth,
                    std::uint64_t budget = kDefaultBudget);

  std::uint64_t size() const { return size_; }
  std::size_t coordinates() const { return bounds_.size(); }
  ProductPoint at(std::uint64_t index) const;
  /// Inverse of at(); the point must use only materialized coordinates.
  std::uint64_t index_of(const ProductPoint& x) const;

 private:
  std::vector<std::uint32_t> bounds_;
  std::vector<std::vector<Point>> choices_;  // indexed by bound
  std::vector<std::map<Point, std::uint64_t>> ranks_;
  std::vector<std::uint64_t> radix_;
  std::uint64_t size_ = 1;
};

std::vector<ProductPoint> materialize(const ProductDescriptor& desc, std::uint32_t ground,
                                      std::size_t depth, std::uint64_t budget = kDefaultBudget);

/// Closed-form point count of a materialization.
std::uint64_t materialized_count(const ProductDescriptor& desc, std::uint32_t ground,
                                 std::size_t depth);

}  // namespace sigma
