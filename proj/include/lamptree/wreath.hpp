#pragma once

#include <cstddef>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lamptree/tree.hpp"

namespace lamptree {

/// Finitely supported lamp configuration T -> Z_r. Only lit lamps
/// (nonzero states) are stored.
class Configuration {
 public:
  using Map = std::unordered_map<TreeVertex, int, TreeVertexHash>;

  /// Placeholder with r() == 0, only meant to be assigned over.
  Configuration() = default;
  explicit Configuration(int r);
  static Configuration delta(int r, const TreeVertex& at, int state = 1);

  int r() const { return r_; }
  int at(const TreeVertex& v) const;
  void set(const TreeVertex& v, int state);
  /// Adds `delta` (mod r) to the lamp at v.
  void add_at(const TreeVertex& v, int delta);

  bool empty() const { return lamps_.empty(); }
  std::size_t support_size() const { return lamps_.size(); }
  const Map& lamps() const { return lamps_; }
  /// Lit vertices in letter order.
  std::vector<TreeVertex> support() const;
  std::vector<std::pair<TreeVertex, int>> sorted() const;

  Configuration negated() const;
  /// Lamps at distance <= radius from o.
  Configuration restricted_to_ball(std::size_t radius) const;

  /// Order-independent; consistent with ==.
  std::size_t hash() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  int r_ = 0;
  Map lamps_;
};

struct GroupElement {
  Configuration eta;
  TreeVertex x;

  std::size_t hash() const { return eta.hash() * 0x9e3779b97f4a7c15ULL ^ x.hash(); }
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const { return g.hash(); }
};

/// A point of the geometric boundary known to finite precision: a finite
/// configuration together with a cylinder of ends.
struct BoundaryPoint {
  Configuration zeta;
  EndPrefix end;

  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;
};

/// The wreath product Z_r wr Gamma over a free product base.
class Lamplighter {
 public:
  Lamplighter(FreeProductSignature signature, int r);

  const FreeProduct& base() const { return base_; }
  const FreeProductSignature& signature() const { return base_.signature(); }
  int r() const { return r_; }
  int q() const { return base_.q(); }

  Configuration zero() const { return Configuration(r_); }
  GroupElement identity() const { return {zero(), TreeVertex{}}; }

  Configuration config_add(const Configuration& a, const Configuration& b) const;
  /// (T_x eta)(y) = eta(x^{-1} y).
  Configuration translate(const TreeVertex& x, const Configuration& eta) const;

  GroupElement mul(const GroupElement& g, const GroupElement& h) const;
  GroupElement inv(const GroupElement& g) const;

  /// Word metric for the generators "move along a tree edge" and
  /// "switch the lamp at the current vertex".
  std::size_t distance(const GroupElement& g, const GroupElement& h) const;

  /// Left action on the boundary. Throws UnresolvedAtDepth when x cancels the
  /// whole end prefix, so the image end is not determined.
  BoundaryPoint act(const GroupElement& g, const BoundaryPoint& beta) const;

  /// Moves (zero, s) for each tree generator s, then switches (k delta_o, o).
  std::vector<GroupElement> generators() const;

  /// Graph neighbours of (eta, x) built directly from the adjacency relation
  /// (walk to a tree neighbour, or change the lamp at x), not via mul.
  std::vector<GroupElement> graph_neighbors(const GroupElement& g) const;

  /// Breadth-first search from id in the lamplighter graph; maps every
  /// element of the ball B(id, radius) to its graph distance.
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> ball(std::size_t radius) const;

  void check(const Configuration& c) const;
  void check(const GroupElement& g) const { check(g.eta); }

 private:
  FreeProduct base_;
  int r_;
};

}  // namespace lamptree
