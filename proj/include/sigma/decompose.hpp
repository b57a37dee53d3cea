#pragma once

// Clopen decompositions of w-powers into a null sequence of boxes around one
// limit point, with symbolic verification, plus the product embedding and
// the sigma_1 -> sigma_k retraction used for K = sigma_1^w.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigma/clopen.hpp"
#include "sigma/parallel.hpp"

namespace sigma {

/// A(k,i), B'(j) (index in i), B(k,i) and K(n) (index in k).
struct PieceLabel {
  char family;  // 'A', 'b' for B', 'B', 'K'
  std::size_t k = 0;
  std::size_t i = 0;

  auto operator<=>(const PieceLabel&) const = default;
  std::string to_string() const;
};

struct DecompositionPiece {
  PieceLabel label;
  BasicBox box;
  ProductDescriptor claimed_type;
  std::size_t fixed_prefix = 0;  // leading coordinates pinned to the limit point
};

enum class DecompositionKind { absorb_a, absorb_b, classif_k };

/// One family: the ambient, its pieces up to a depth cutoff, and the limit.
class Decomposition {
 public:
  /// sigma_n^w split by A(k,i), witnesses gamma_0..gamma_{n-1}.
  static Decomposition absorb_a(std::uint32_t n, std::vector<Element> witnesses, std::size_t depth);
  /// sigma_m x sigma_n^w split by B'(j), B(k,i); requires m < n.
  static Decomposition absorb_b(std::uint32_t m, std::uint32_t n, std::vector<Element> witnesses,
                                std::size_t depth);
  /// sigma_1^w split by K(n) = {x : gamma in x_1..x_{n-1}, gamma not in x_n}.
  static Decomposition classif_k(Element gamma, std::size_t depth);

  DecompositionKind kind() const { return kind_; }
  const ProductDescriptor& ambient() const { return ambient_; }
  const ProductPoint& limit() const { return limit_; }
  const std::vector<Element>& witnesses() const { return witnesses_; }
  std::uint32_t m() const { return m_; }
  std::uint32_t n() const { return n_; }
  std::size_t depth() const { return depth_; }

  /// Pieces with k < depth (all B' pieces included).
  const std::vector<DecompositionPiece>& pieces() const { return pieces_; }
  /// Any piece, regardless of depth.
  DecompositionPiece piece(const PieceLabel& label) const;
  /// The piece containing x by the defining conditions, or nullopt for the
  /// limit point.
  std::optional<PieceLabel> locate(const ProductPoint& x) const;

 private:
  DecompositionKind kind_{};
  ProductDescriptor ambient_;
  ProductPoint limit_;
  std::vector<Element> witnesses_;
  std::uint32_t m_ = 0, n_ = 0;
  std::size_t depth_ = 0;
  std::vector<DecompositionPiece> pieces_;
};

struct DecompositionReport {
  bool types_ok = false;           // claimed_type == box_reduce type, all pieces
  std::uint64_t pairs_checked = 0;
  bool disjoint_ok = false;
  std::uint64_t samples = 0;
  std::uint64_t limit_hits = 0;
  std::uint64_t sample_failures = 0;
  std::uint64_t neighborhoods = 0;
  std::uint64_t cofinite_failures = 0;
  std::vector<std::string> failures;  // first few, human readable

  bool ok() const {
    return types_ok && disjoint_ok && sample_failures == 0 && cofinite_failures == 0;
  }
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::size_t neighborhoods = 50;
  Exec exec = Exec::serial;
};

DecompositionReport verify(const Decomposition& d, const VerifyOptions& opt = {});

// ---------------------------------------------------------------- witnesses

/// x -> union of x_i x {i}, tags 1-based.
using TaggedPoint = std::vector<std::pair<Element, std::uint32_t>>;
TaggedPoint embed_product_into_sigma(const std::vector<Point>& xs, const std::vector<std::uint32_t>& ks);
std::string to_string(const TaggedPoint& t);

/// sigma_1(Gamma \ fixed) ~ Phi_fixed (a clopen of sigma_k) via x -> x u fixed;
/// the retraction sends everything outside the clopen to `fixed`.
class RetractWitness {
 public:
  RetractWitness(std::uint32_t k, Point fixed);

  const BasicBox& image() const { return image_; }
  Point embed(const Point& x) const;
  Point inverse(const Point& y) const;
  Point retract(const Point& y) const;
  /// r^{-1}(b) for a box b over sigma_k, as a union of boxes over sigma_k.
  ClopenSet retraction_preimage(const BasicBox& b) const;

 private:
  std::uint32_t k_;
  Point fixed_;
  BasicBox image_;
};

}  // namespace sigma
