#pragma once

// The union map p : sigma_1^k -> sigma_k and its regular averaging operator
//
//     T(f)(y) = (1/|L(y)|) * sum_{x in L(y)} f(x),
//
// where L(y) holds the k-tuples of pairwise disjoint singletons-or-empty
// whose union is y. Operators are exact rational sparse matrices with one
// row per codomain point. Products and restrictions of operators are built
// at finite scale and re-checked against the three axioms
// T(1) = 1, f >= 0 => T(f) >= 0, T(g o p) = g.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sigma/ground.hpp"
#include "sigma/parallel.hpp"

namespace sigma {

using Rational = mpq_class;

/// x_1 u ... u x_k; every coordinate must have at most one element.
Point apply_union(std::span<const Point> x);

/// The tuple x_i = {y_i} for i < |y|, empty afterwards.
std::vector<Point> canonical_lift(const Point& y, std::uint32_t k);

struct DisjointTupleSet {
  Point y;
  std::uint32_t k = 0;
  std::vector<std::vector<Point>> tuples;  // lexicographic by coordinate choice
};

/// k! / (k - m)!
std::uint64_t disjoint_tuple_count(std::size_t m, std::uint32_t k);

DisjointTupleSet enumerate_L(const Point& y, std::uint32_t k);

struct OperatorEntry {
  std::uint64_t domain;  // index into the domain enumeration
  Rational weight;
};

/// Averaging operator for a blockwise union map
///   prod_b sigma_1^{k_b}  ->  prod_b sigma_{k_b}
/// over ground {0..ground-1}. Functions on the domain are dense vectors
/// indexed by ProductEnumerator(domain_descriptor()).
class AveragingOperator {
 public:
  std::vector<std::uint32_t> blocks;
  std::uint32_t ground = 0;
  std::vector<ProductPoint> codomain;  // one per row
  std::vector<std::vector<OperatorEntry>> rows;

  std::uint32_t domain_arity() const;
  ProductDescriptor domain_descriptor() const;
  ProductDescriptor codomain_descriptor() const;
  ProductEnumerator domain_enumerator(std::uint64_t budget = kDefaultBudget) const;

  /// The surjection: blockwise union of a domain point.
  ProductPoint map(const ProductPoint& x) const;

  /// T(f) as one value per row. f.size() must equal the domain size.
  std::vector<Rational> apply(std::span<const Rational> f, Exec exec = Exec::serial) const;

  /// Row index of a codomain point, or -1.
  std::int64_t row_of(const ProductPoint& y) const;
};

AveragingOperator build_operator(std::uint32_t k, std::uint32_t ground, Exec exec = Exec::serial,
                                 std::uint64_t budget = kDefaultBudget);

/// Product measure of the factor rows.
AveragingOperator product_operator(std::span<const AveragingOperator> ops,
                                   std::uint64_t budget = kDefaultBudget);

/// Rows of M only, supports cut to the preimage of M and renormalized.
AveragingOperator restrict_operator(const AveragingOperator& op, std::span<const ProductPoint> M);

struct AxiomReport {
  bool preserves_one = true;  // T(1) = 1
  bool positive = true;       // all weights > 0
  bool inverts_map = true;    // T(g o p) = g for every codomain indicator g
  std::uint64_t rows = 0;
  std::vector<std::string> failures;

  bool ok() const { return preserves_one && positive && inverts_map; }
};

AxiomReport check_axioms(const AveragingOperator& op, Exec exec = Exec::serial,
                         std::uint64_t budget = kDefaultBudget);

/// True iff every row of a single-block operator is supported exactly on
/// L(y) with weight 1/|L(y)|.
bool rows_match_L(const AveragingOperator& op);

/// r : L(y') -> L(y), r(x)_i = x_i n y.
struct FiberMap {
  Point y;
  Point y_prime;
  std::uint32_t k = 0;
  std::vector<std::pair<std::vector<Point>, std::vector<Point>>> assignment;
  std::uint64_t fiber_size = 0;  // common size of every fiber
};

FiberMap fiber_map(const Point& y, const Point& y_prime, std::uint32_t k);

/// Locality law: a function that sees only which elements of F sit in which
/// coordinate averages to a function of (y n F, |y|).
struct LocalityKey {
  Point trace;  // y n F
  std::size_t size;
  auto operator<=>(const LocalityKey&) const = default;
};

struct LocalityTable {
  bool pass = true;
  std::map<LocalityKey, Rational> levels;
};

/// Checks one function f (dense over the domain). f must depend only on the
/// F-memberships of the coordinates; otherwise PreconditionError.
LocalityTable locality_table(const AveragingOperator& op, const Point& F,
                             std::span<const Rational> f);

struct LocalityProfile {
  bool pass = true;
  /// pattern[i] = element of F in coordinate i, or -1.
  std::vector<std::vector<std::int64_t>> patterns;
  std::vector<LocalityTable> tables;  // one per pattern indicator
};

/// Runs locality_table on the indicator of every F-membership pattern;
/// these span all functions the law quantifies over.
LocalityProfile locality_profile(const AveragingOperator& op, const Point& F);

}  // namespace sigma
