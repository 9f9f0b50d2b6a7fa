#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lamptree/wreath.hpp"

namespace lamptree {

struct Atom {
  GroupElement element;
  double p = 0.0;
};

/// Finitely supported probability law on Z_r wr Gamma.
class MeasureSpec {
 public:
  /// Throws std::invalid_argument unless masses are positive, sum to 1
  /// within 1e-12 and atoms are distinct.
  MeasureSpec(Lamplighter group, std::vector<Atom> atoms, std::string label = {});

  const Lamplighter& group() const { return group_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::string& label() const { return label_; }

 private:
  Lamplighter group_;
  std::vector<Atom> atoms_;
  std::string label_;
};

struct TreeAtom {
  TreeVertex x;
  double p = 0.0;
};

/// Finitely supported law on the base group (a walk on the tree).
class TreeMeasure {
 public:
  TreeMeasure(FreeProduct base, std::vector<TreeAtom> atoms);

  const FreeProduct& base() const { return base_; }
  const std::vector<TreeAtom>& atoms() const { return atoms_; }
  double mass(const TreeVertex& x) const;

 private:
  FreeProduct base_;
  std::vector<TreeAtom> atoms_;
};

/// Move to a uniform neighbour with probability theta, otherwise switch the
/// current lamp to a uniformly chosen different state.
MeasureSpec basic_walk(FreeProductSignature signature, int r, double theta);
/// Uniform over the q+1 moves; lamps never change.
MeasureSpec walk_only(FreeProductSignature signature, int r);
MeasureSpec point_mass(const Lamplighter& group, const GroupElement& g);

/// Simple random walk on the tree, uniform over the q+1 generators.
TreeMeasure simple_random_walk(const FreeProduct& base);

/// Law of the base coordinate: sum over eta of mu(eta, x).
TreeMeasure project_measure(const MeasureSpec& mu);

/// R(mu): largest min{d(y,o), d(y,x)} over atoms (eta, x) and lit y.
std::size_t bounded_range(const MeasureSpec& mu);

struct TruncatedMeasure {
  MeasureSpec measure;
  std::size_t max_range = 0;
  /// Mass removed: atoms beyond the range plus whatever the listed atoms
  /// were short of 1. The kept atoms are rescaled by 1 / (1 - discarded).
  double discarded = 0.0;
};

/// Finite-range approximation of a law with unbounded lamp range. `atoms`
/// lists part of the law (masses summing to at most 1); atoms lighting a
/// lamp y with min{d(y,o), d(y,x)} > max_range are dropped.
TruncatedMeasure truncate_lamp_range(const Lamplighter& group, std::vector<Atom> atoms, std::size_t max_range,
                                     std::string label = {});

/// Expected lamplighter distance from id of one increment.
double first_moment(const MeasureSpec& mu);

struct GenerationReport {
  bool generates_ball = false;
  std::size_t ball_size = 0;
  std::vector<GroupElement> unreached;
};

inline constexpr std::size_t kMaxGenerationRadius = 6;

/// Explores products of atoms starting from id, keeping partial products
/// inside B(id, radius + slack), and reports which elements of B(id, radius)
/// were never reached. Positive evidence only; not a proof of generation.
/// `slack` < 0 selects the largest atom length.
GenerationReport check_semigroup_generation(const MeasureSpec& mu, std::size_t radius, int slack = -1);

}  // namespace lamptree
