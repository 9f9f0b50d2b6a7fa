#include "lamptree/tree.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "lamptree/errors.hpp"

namespace lamptree {

namespace {

std::size_t magnitude(std::int64_t e) { return static_cast<std::size_t>(e < 0 ? -e : e); }

// Letters are ordered by (factor, sign) with the positive letter first,
// which coincides with the generator numbering of FreeProduct.
int letter_code(int factor, std::int64_t exponent) { return 2 * factor + (exponent < 0 ? 1 : 0); }

}  // namespace

void FreeProductSignature::validate() const {
  if (a < 0 || b < 0) throw std::invalid_argument("signature: a and b must be non-negative");
  if (a + 2 * b < 3)
    throw std::invalid_argument("signature: a + 2b must be at least 3 (tree degree q+1 >= 3)");
}

namespace detail {
TreeVertex make_vertex(std::vector<Syllable> syllables) {
  TreeVertex v;
  v.syllables_.reserve(syllables.size());
  for (const auto& s : syllables) v.push(s);
  return v;
}
}  // namespace detail

namespace {

constexpr std::uint64_t kHashBase = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t odd_inverse(std::uint64_t a) {
  std::uint64_t x = a;  // Newton iteration, correct to 64 bits after 5 rounds
  for (int i = 0; i < 5; ++i) x *= 2 - a * x;
  return x;
}
constexpr std::uint64_t kHashBaseInverse = odd_inverse(kHashBase);
static_assert(kHashBase * kHashBaseInverse == 1);

std::uint64_t syllable_key(const Syllable& s) {
  std::uint64_t k = static_cast<std::uint64_t>(s.factor) * 0x100000001b3ULL ^
                    static_cast<std::uint64_t>(s.exponent) * 0xc2b2ae3d27d4eb4fULL;
  return k + 0x632be59bd9b4e019ULL;
}

}  // namespace

void TreeVertex::push(Syllable s) {
  rolling_ += syllable_key(s) * power_;
  power_ *= kHashBase;
  length_ += magnitude(s.exponent);
  syllables_.push_back(s);
}

void TreeVertex::pop() {
  power_ *= kHashBaseInverse;
  rolling_ -= syllable_key(syllables_.back()) * power_;
  length_ -= magnitude(syllables_.back().exponent);
  syllables_.pop_back();
}

void TreeVertex::set_last_exponent(std::int64_t e) {
  Syllable& last = syllables_.back();
  const std::uint64_t p = power_ * kHashBaseInverse;
  rolling_ -= syllable_key(last) * p;
  length_ = length_ - magnitude(last.exponent) + magnitude(e);
  last.exponent = e;
  rolling_ += syllable_key(last) * p;
}

std::size_t TreeVertex::hash() const {
  std::uint64_t h = rolling_ ^ (static_cast<std::uint64_t>(length_) << 32);
  h ^= h >> 33;  // murmur finalizer
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const TreeVertex& x, const TreeVertex& y) {
  const auto& sx = x.syllables_;
  const auto& sy = y.syllables_;
  std::size_t i = 0;
  while (i < sx.size() && i < sy.size() && sx[i] == sy[i]) ++i;
  if (i == sx.size() && i == sy.size()) return std::strong_ordering::equal;
  if (i == sx.size()) return std::strong_ordering::less;
  if (i == sy.size()) return std::strong_ordering::greater;

  const Syllable& a = sx[i];
  const Syllable& b = sy[i];
  int la = letter_code(a.factor, a.exponent);
  int lb = letter_code(b.factor, b.exponent);
  if (la != lb) return la <=> lb;

  // Same letter repeated a different number of times: the shorter run is
  // followed by a letter of another factor (or by the end of the word).
  auto next_code = [](const std::vector<Syllable>& s, std::size_t j) {
    return j < s.size() ? letter_code(s[j].factor, s[j].exponent) : -1;
  };
  if (magnitude(a.exponent) < magnitude(b.exponent)) return next_code(sx, i + 1) <=> la;
  return la <=> next_code(sy, i + 1);
}

EndPrefix::EndPrefix(TreeVertex prefix) : prefix_(std::move(prefix)) {
  if (prefix_.is_root()) throw std::invalid_argument("end prefix must have depth >= 1");
}

void EndPrefix::refine(TreeVertex longer) {
  if (!is_prefix(prefix_, longer))
    throw std::invalid_argument("refinement does not extend the current end prefix");
  prefix_ = std::move(longer);
}

std::uint64_t RhoValue::denominator() const {
  if (!exponent_) return 1;
  std::uint64_t d = 1;
  for (std::size_t i = 0; i < *exponent_; ++i) {
    if (d > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(q_))
      throw std::overflow_error("rho denominator exceeds 64 bits");
    d *= static_cast<std::uint64_t>(q_);
  }
  return d;
}

double RhoValue::to_double() const {
  if (!exponent_) return 0.0;
  double v = 1.0;
  for (std::size_t i = 0; i < *exponent_; ++i) v /= q_;
  return v;
}

std::strong_ordering operator<=>(const RhoValue& x, const RhoValue& y) {
  if (x.is_zero() || y.is_zero()) return (!x.is_zero()) <=> (!y.is_zero());
  // Larger exponent means smaller value.
  return *y.exponent_ <=> *x.exponent_;
}

std::size_t common_prefix_length(const TreeVertex& x, const TreeVertex& y) {
  const auto& sx = x.syllables();
  const auto& sy = y.syllables();
  std::size_t n = 0;
  for (std::size_t i = 0; i < sx.size() && i < sy.size(); ++i) {
    if (sx[i] == sy[i]) {
      n += magnitude(sx[i].exponent);
      continue;
    }
    if (sx[i].factor == sy[i].factor && (sx[i].exponent < 0) == (sy[i].exponent < 0))
      n += std::min(magnitude(sx[i].exponent), magnitude(sy[i].exponent));
    break;
  }
  return n;
}

TreeVertex prefix(const TreeVertex& x, std::size_t depth) {
  if (depth > x.length()) throw std::out_of_range("prefix deeper than word");
  std::vector<Syllable> out;
  std::size_t remaining = depth;
  for (const auto& s : x.syllables()) {
    if (remaining == 0) break;
    std::size_t m = magnitude(s.exponent);
    if (m <= remaining) {
      out.push_back(s);
      remaining -= m;
    } else {
      auto k = static_cast<std::int64_t>(remaining);
      out.push_back({s.factor, s.exponent < 0 ? -k : k});
      remaining = 0;
    }
  }
  return detail::make_vertex(std::move(out));
}

bool is_prefix(const TreeVertex& p, const TreeVertex& x) {
  return p.length() <= x.length() && common_prefix_length(p, x) == p.length();
}

std::size_t tree_distance(const TreeVertex& x, const TreeVertex& y) {
  return x.length() + y.length() - 2 * common_prefix_length(x, y);
}

std::vector<TreeVertex> geodesic(const TreeVertex& x, const TreeVertex& y) {
  std::size_t c = common_prefix_length(x, y);
  std::vector<TreeVertex> path;
  path.reserve(x.length() + y.length() - 2 * c + 1);
  for (std::size_t k = x.length(); k > c; --k) path.push_back(prefix(x, k));
  for (std::size_t k = c; k <= y.length(); ++k) path.push_back(prefix(y, k));
  return path;
}

TreeVertex confluent(const TreeVertex& w, const TreeVertex& z) {
  return prefix(w, common_prefix_length(w, z));
}

TreeVertex confluent(const TreeVertex& w, const EndPrefix& z) {
  const TreeVertex& p = z.prefix();
  std::size_t c = common_prefix_length(w, p);
  // If the whole prefix is shared and w goes deeper, the ray past the
  // prefix is unknown.
  if (c == p.length() && w.length() > c)
    throw UnresolvedAtDepth("confluent of vertex and end needs end depth > " +
                            std::to_string(p.length()));
  return prefix(w, c);
}

TreeVertex confluent(const EndPrefix& w, const TreeVertex& z) { return confluent(z, w); }

TreeVertex confluent(const EndPrefix& w, const EndPrefix& z) {
  std::size_t c = common_prefix_length(w.prefix(), z.prefix());
  if (c == std::min(w.depth(), z.depth()))
    throw UnresolvedAtDepth("end prefixes agree to depth " + std::to_string(c));
  return prefix(w.prefix(), c);
}

RhoValue rho(int q, const TreeVertex& w, const TreeVertex& z) {
  if (w == z) return RhoValue::zero(q);
  return RhoValue::power(q, common_prefix_length(w, z));
}
RhoValue rho(int q, const TreeVertex& w, const EndPrefix& z) {
  return RhoValue::power(q, gromov_product(w, z));
}
RhoValue rho(int q, const EndPrefix& w, const TreeVertex& z) { return rho(q, z, w); }
RhoValue rho(int q, const EndPrefix& w, const EndPrefix& z) {
  return RhoValue::power(q, gromov_product(w, z));
}

TreeVertex step_toward(const TreeVertex& y, const TreeVertex& z) {
  if (y == z) throw std::invalid_argument("step_toward: target equals source");
  if (is_prefix(y, z)) return prefix(z, y.length() + 1);
  return prefix(y, y.length() - 1);
}

TreeVertex step_toward(const TreeVertex& y, const EndPrefix& u) {
  const TreeVertex& p = u.prefix();
  std::size_t c = common_prefix_length(y, p);
  if (c == y.length()) {
    if (p.length() > y.length()) return prefix(p, y.length() + 1);
    throw UnresolvedAtDepth("end prefix ends at y; direction beyond it unknown");
  }
  if (c == p.length())
    throw UnresolvedAtDepth("y lies below the end prefix; need end depth > " +
                            std::to_string(y.length()));
  return prefix(y, y.length() - 1);
}

bool subtree_member(const TreeVertex& y, const EndPrefix& u, const TreeVertex& v) {
  if (y == v) return false;
  return step_toward(y, u) == step_toward(y, v);
}

std::size_t steiner_tour_length(const TreeVertex& x, const TreeVertex& x2,
                                std::span<const TreeVertex> S) {
  if (S.empty()) return tree_distance(x, x2);
  std::vector<const TreeVertex*> pts;
  pts.reserve(S.size() + 2);
  pts.push_back(&x);
  pts.push_back(&x2);
  for (const auto& s : S) pts.push_back(&s);
  std::sort(pts.begin(), pts.end(), [](const TreeVertex* l, const TreeVertex* r) { return *l < *r; });

  // In letter order, the union of root paths has sum |w_i| - sum lcp(w_i, w_{i+1})
  // non-root vertices; the part above the common confluent is not needed.
  std::size_t union_edges = pts[0]->length();
  for (std::size_t i = 1; i < pts.size(); ++i)
    union_edges += pts[i]->length() - common_prefix_length(*pts[i - 1], *pts[i]);
  std::size_t edges = union_edges - common_prefix_length(*pts.front(), *pts.back());
  return 2 * edges - tree_distance(x, x2);
}

FreeProduct::FreeProduct(FreeProductSignature signature) : signature_(signature) {
  signature_.validate();
  for (int f = 0; f < signature_.factors(); ++f) {
    generators_.push_back(detail::make_vertex({{f, 1}}));
    if (!signature_.is_involution(f)) generators_.push_back(detail::make_vertex({{f, -1}}));
  }
}

void FreeProduct::append(TreeVertex& x, Syllable s, std::size_t& cancelled) const {
  if (s.factor < 0 || s.factor >= signature_.factors())
    throw std::out_of_range("syllable factor index " + std::to_string(s.factor) +
                            " outside 0.." + std::to_string(signature_.factors() - 1));
  if (signature_.is_involution(s.factor)) s.exponent = (s.exponent % 2 == 0) ? 0 : 1;
  if (s.exponent == 0) return;

  const auto& syl = x.syllables_;
  if (syl.empty() || syl.back().factor != s.factor) {
    x.push(s);
    return;
  }
  const Syllable& last = syl.back();
  std::int64_t merged = signature_.is_involution(s.factor) ? 0 : last.exponent + s.exponent;
  std::size_t before = magnitude(last.exponent);
  std::size_t added = magnitude(s.exponent);
  std::size_t after = magnitude(merged);
  cancelled += (before + added - after) / 2;
  if (merged == 0)
    x.pop();
  else
    x.set_last_exponent(merged);
}

TreeVertex FreeProduct::reduce(std::span<const Syllable> raw) const {
  TreeVertex x;
  std::size_t cancelled = 0;
  for (const auto& s : raw) append(x, s, cancelled);
  return x;
}

std::size_t FreeProduct::right_multiply(TreeVertex& x, const TreeVertex& y) const {
  std::size_t cancelled = 0;
  for (const auto& s : y.syllables()) append(x, s, cancelled);
  return cancelled;
}

TreeVertex FreeProduct::mul(const TreeVertex& x, const TreeVertex& y) const {
  TreeVertex out = x;
  right_multiply(out, y);
  return out;
}

TreeVertex FreeProduct::inverse(const TreeVertex& x) const {
  std::vector<Syllable> out(x.syllables().rbegin(), x.syllables().rend());
  for (auto& s : out)
    if (!signature_.is_involution(s.factor)) s.exponent = -s.exponent;
  return detail::make_vertex(std::move(out));
}

std::vector<TreeVertex> FreeProduct::neighbors(const TreeVertex& x) const {
  std::vector<TreeVertex> out;
  out.reserve(generators_.size());
  for (const auto& g : generators_) out.push_back(mul(x, g));
  return out;
}

TreeVertex FreeProduct::ray_vertex(std::size_t depth) const {
  TreeVertex x;
  for (std::size_t k = 0; k < depth; ++k) {
    for (const auto& g : generators_) {
      TreeVertex next = mul(x, g);
      if (next.length() == x.length() + 1) {
        x = std::move(next);
        break;
      }
    }
  }
  return x;
}

std::vector<TreeVertex> FreeProduct::sphere(std::size_t depth) const {
  std::vector<TreeVertex> layer{TreeVertex{}};
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<TreeVertex> next;
    next.reserve(layer.size() * static_cast<std::size_t>(q()));
    for (const auto& x : layer)
      for (const auto& g : generators_) {
        TreeVertex y = mul(x, g);
        if (y.length() == k + 1) next.push_back(std::move(y));
      }
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

}  // namespace lamptree
