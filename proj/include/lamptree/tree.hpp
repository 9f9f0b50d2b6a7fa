#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace lamptree {

/// Shape of the base group: a free product of `a` copies of Z2 and `b`
/// copies of Z. Its Cayley graph w.r.t. the standard generators is the
/// homogeneous tree of degree a + 2b = q + 1.
struct FreeProductSignature {
  int a = 0;
  int b = 0;

  int factors() const { return a + b; }
  int degree() const { return a + 2 * b; }
  int q() const { return a + 2 * b - 1; }
  bool is_involution(int factor) const { return factor < a; }

  /// Throws std::invalid_argument unless a, b >= 0 and a + 2b >= 3.
  void validate() const;

  friend bool operator==(const FreeProductSignature&, const FreeProductSignature&) = default;
};

struct Syllable {
  int factor = 0;
  std::int64_t exponent = 0;

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

class FreeProduct;
class TreeVertex;

namespace detail {
TreeVertex make_vertex(std::vector<Syllable> syllables);
}

/// A reduced word in the free product, i.e. a vertex of the tree.
/// Default-constructed value is the root o.
class TreeVertex {
 public:
  TreeVertex() = default;

  const std::vector<Syllable>& syllables() const { return syllables_; }
  /// Word length, equal to the tree distance d(o, x).
  std::size_t length() const { return length_; }
  bool is_root() const { return syllables_.empty(); }

  std::size_t hash() const;

  friend bool operator==(const TreeVertex& x, const TreeVertex& y) {
    return x.length_ == y.length_ && x.rolling_ == y.rolling_ && x.syllables_ == y.syllables_;
  }
  /// Lexicographic order on the letter sequences (generator index order).
  friend std::strong_ordering operator<=>(const TreeVertex& x, const TreeVertex& y);

 private:
  friend class FreeProduct;
  friend TreeVertex detail::make_vertex(std::vector<Syllable> syllables);

  void push(Syllable s);
  void pop();
  void set_last_exponent(std::int64_t e);

  std::vector<Syllable> syllables_;
  std::size_t length_ = 0;
  // Polynomial hash sum_i key(s_i) P^i mod 2^64 and P^(syllable count),
  // kept up to date so hashing is O(1) on arbitrarily long words.
  std::uint64_t rolling_ = 0;
  std::uint64_t power_ = 1;
};

struct TreeVertexHash {
  std::size_t operator()(const TreeVertex& x) const { return x.hash(); }
};

/// Finite-precision end: the cylinder of all ends whose ray from o passes
/// through `prefix`.
class EndPrefix {
 public:
  /// Throws std::invalid_argument for the root (depth 0 is not a cylinder).
  explicit EndPrefix(TreeVertex prefix);

  const TreeVertex& prefix() const { return prefix_; }
  std::size_t depth() const { return prefix_.length(); }

  /// Replace by a longer prefix that extends the current one.
  void refine(TreeVertex longer);

  friend bool operator==(const EndPrefix&, const EndPrefix&) = default;

 private:
  TreeVertex prefix_;
};

/// Exact value q^{-k} (or 0) of the ultrametric on the end compactification.
class RhoValue {
 public:
  static RhoValue zero(int q) { return RhoValue(q, std::nullopt); }
  static RhoValue power(int q, std::size_t k) { return RhoValue(q, k); }

  bool is_zero() const { return !exponent_; }
  int base() const { return q_; }
  /// k in q^{-k}; empty for zero.
  std::optional<std::size_t> exponent() const { return exponent_; }
  std::uint64_t numerator() const { return exponent_ ? 1 : 0; }
  /// q^k; throws std::overflow_error when it does not fit in 64 bits.
  std::uint64_t denominator() const;
  double to_double() const;

  friend bool operator==(const RhoValue&, const RhoValue&) = default;
  /// Orders by numeric value. Both operands must share the same q.
  friend std::strong_ordering operator<=>(const RhoValue& x, const RhoValue& y);

 private:
  RhoValue(int q, std::optional<std::size_t> k) : q_(q), exponent_(k) {}
  int q_;
  std::optional<std::size_t> exponent_;
};

// Signature-independent tree geometry. All of these work on canonical words.

std::size_t common_prefix_length(const TreeVertex& x, const TreeVertex& y);
/// The first `depth` letters of x; depth must not exceed |x|.
TreeVertex prefix(const TreeVertex& x, std::size_t depth);
/// True when p is a (not necessarily proper) prefix of x.
bool is_prefix(const TreeVertex& p, const TreeVertex& x);
std::size_t tree_distance(const TreeVertex& x, const TreeVertex& y);
/// Vertices from x to y along the unique geodesic, endpoints included.
std::vector<TreeVertex> geodesic(const TreeVertex& x, const TreeVertex& y);

TreeVertex confluent(const TreeVertex& w, const TreeVertex& z);
TreeVertex confluent(const TreeVertex& w, const EndPrefix& z);
TreeVertex confluent(const EndPrefix& w, const TreeVertex& z);
TreeVertex confluent(const EndPrefix& w, const EndPrefix& z);

/// Gromov product (w|z) = d(o, w ^ z).
template <class W, class Z>
std::size_t gromov_product(const W& w, const Z& z) {
  return confluent(w, z).length();
}

RhoValue rho(int q, const TreeVertex& w, const TreeVertex& z);
RhoValue rho(int q, const TreeVertex& w, const EndPrefix& z);
RhoValue rho(int q, const EndPrefix& w, const TreeVertex& z);
RhoValue rho(int q, const EndPrefix& w, const EndPrefix& z);

/// First vertex after y on the geodesic from y to z (z != y).
TreeVertex step_toward(const TreeVertex& y, const TreeVertex& z);
/// First vertex after y on the ray from y to the end u.
TreeVertex step_toward(const TreeVertex& y, const EndPrefix& u);

/// True iff v lies in T_y(u), the component of T \ {y} containing the end u
/// (so false for v == y).
bool subtree_member(const TreeVertex& y, const EndPrefix& u, const TreeVertex& v);

/// Length of a shortest walk from x to x2 visiting every vertex of S.
std::size_t steiner_tour_length(const TreeVertex& x, const TreeVertex& x2,
                                std::span<const TreeVertex> S);

/// Group structure of the free product of Z2 and Z factors.
///
/// Generators are numbered 0..q: first the a involutions, then for every
/// Z factor its positive and negative letter. Letter order in words (and
/// therefore `operator<=>` on TreeVertex) follows this numbering.
class FreeProduct {
 public:
  explicit FreeProduct(FreeProductSignature signature);

  const FreeProductSignature& signature() const { return signature_; }
  int q() const { return signature_.q(); }

  /// The q + 1 one-letter words.
  const std::vector<TreeVertex>& generators() const { return generators_; }

  /// Canonical form of an arbitrary syllable sequence. Throws
  /// std::out_of_range for a factor index outside 0..a+b-1.
  TreeVertex reduce(std::span<const Syllable> raw) const;
  TreeVertex reduce(std::initializer_list<Syllable> raw) const {
    return reduce(std::span<const Syllable>(raw.begin(), raw.size()));
  }

  TreeVertex mul(const TreeVertex& x, const TreeVertex& y) const;
  TreeVertex inverse(const TreeVertex& x) const;

  /// x <- x y in place. Returns the number of letters of x cancelled, so
  /// that |x_old| - result is the common prefix length of old and new x.
  std::size_t right_multiply(TreeVertex& x, const TreeVertex& y) const;

  std::vector<TreeVertex> neighbors(const TreeVertex& x) const;

  /// Deterministic reduced word of the given length: at every position the
  /// smallest-index generator that keeps the word reduced.
  TreeVertex ray_vertex(std::size_t depth) const;

  /// Every vertex at exactly distance `depth` from o, in letter order.
  std::vector<TreeVertex> sphere(std::size_t depth) const;

 private:
  void append(TreeVertex& x, Syllable s, std::size_t& cancelled) const;

  FreeProductSignature signature_;
  std::vector<TreeVertex> generators_;
};

}  // namespace lamptree

template <>
struct std::hash<lamptree::TreeVertex> {
  std::size_t operator()(const lamptree::TreeVertex& x) const { return x.hash(); }
};
