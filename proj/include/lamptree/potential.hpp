#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lamptree/convergence.hpp"

namespace lamptree {

/// Monte Carlo Green kernel G(x,y) and hitting probability F(x,y) of a walk
/// on the tree, with a half-horizon shadow estimate exposing truncation bias.
struct KernelEstimate {
  TreeVertex x;
  TreeVertex y;
  double G_hat = 0.0;
  double G_se = 0.0;
  double F_hat = 0.0;
  double F_se = 0.0;
  double G_half = 0.0;
  double G_half_se = 0.0;
  double F_half = 0.0;
  double F_half_se = 0.0;
  /// Set when full- and half-horizon Green estimates differ by > 2 SE.
  bool truncation_bias = false;
  std::size_t N = 0;
  std::size_t horizon = 0;
};

KernelEstimate estimate_green(const TreeMeasure& mu_tilde, const TreeVertex& x, const TreeVertex& y,
                              std::size_t N, std::size_t horizon, std::uint64_t seed, unsigned workers = 1);

struct DecayRow {
  std::size_t distance = 0;
  KernelEstimate estimate;
};

/// F_hat(o, x_d) for the representative x_d = base.ray_vertex(d).
std::vector<DecayRow> green_decay_profile(const TreeMeasure& mu_tilde, std::span<const std::size_t> distances,
                                          std::size_t N, std::size_t horizon, std::uint64_t seed,
                                          unsigned workers = 1);

/// Locally constant function on the closure of the boundary: its value
/// depends on the depth-k prefix of the end and the lamps on a finite window.
class BoundaryFunction {
 public:
  using Key = std::pair<TreeVertex, std::vector<int>>;

  BoundaryFunction(std::size_t depth, std::vector<TreeVertex> window, double default_value);

  static BoundaryFunction constant(double value);
  /// 1 on {end passes through prefix, lamps equal the window states}, else 0.
  static BoundaryFunction indicator(const EndPrefix& prefix, std::vector<std::pair<TreeVertex, int>> lamps);

  std::size_t depth() const { return depth_; }
  const std::vector<TreeVertex>& window() const { return window_; }
  double default_value() const { return default_; }
  const std::map<Key, double>& entries() const { return table_; }
  std::size_t window_radius() const;

  /// `prefix` must have length depth(); `lamps` follow window() order.
  void set(TreeVertex prefix, std::vector<int> lamps, double value);
  double value(const TreeVertex& prefix, const std::vector<int>& lamps) const;
  /// f(beta) for a boundary point resolved to at least depth().
  double operator()(const BoundaryPoint& beta) const;
  double operator()(const TreeVertex& end_prefix, const Configuration& zeta) const;
  /// f(Z_inf) if the record resolves it.
  std::optional<double> evaluate(const ConvergenceRecord& record) const;

  double min_value() const;
  double max_value() const;

 private:
  std::size_t depth_;
  std::vector<TreeVertex> window_;
  double default_;
  std::map<Key, double> table_;
};

/// The function beta -> f(g beta), tabulated at depth depth(f) + |x| on the
/// window x^{-1} A. Throws std::length_error if the table would be huge.
BoundaryFunction translate(const Lamplighter& group, const GroupElement& g, const BoundaryFunction& f);

enum class IndeterminatePolicy { exclude, bounds };

struct DirichletOptions {
  std::size_t horizon = 1000;
  double final_fraction = kDefaultFinalFraction;
  unsigned workers = 1;
  IndeterminatePolicy policy = IndeterminatePolicy::exclude;
};

struct HarmonicValue {
  double h_hat = 0.0;
  double std_err = 0.0;
  std::size_t determinate = 0;
  std::size_t indeterminate = 0;
  /// With IndeterminatePolicy::bounds: the estimate with every indeterminate
  /// trajectory assigned min f (lower) or max f (upper). Else equal to h_hat.
  double lower = 0.0;
  double upper = 0.0;
};

/// h(g) = integral of f against the limit law of the walk started at g.
HarmonicValue dirichlet_estimate(const MeasureSpec& mu, const BoundaryFunction& f, const GroupElement& g,
                                 std::size_t N, std::uint64_t seed, const DirichletOptions& options = {});

struct SequenceSpec {
  std::vector<std::size_t> depths;
};

struct SequenceRow {
  std::size_t depth = 0;
  GroupElement g;
  HarmonicValue value;
};

/// g_k = (zeta restricted to B(o,k), depth-k prefix of the end of beta),
/// for every k in spec.depths; returns h_hat(g_k). Stream for g_k is
/// derive_seed(seed, k).
std::vector<SequenceRow> dirichlet_boundary_convergence(const MeasureSpec& mu, const BoundaryFunction& f,
                                                        const BoundaryPoint& beta, const SequenceSpec& spec,
                                                        std::size_t N, std::uint64_t seed,
                                                        const DirichletOptions& options = {});

struct Residual {
  double residual = 0.0;
  double combined_std_err = 0.0;
  double h_center = 0.0;
  double h_average = 0.0;
};

/// |h_hat(g) - sum_s mu(s) h_hat(g s)| with independent streams per term.
Residual mean_value_residual(const MeasureSpec& mu, const BoundaryFunction& f, const GroupElement& g,
                             std::size_t N, std::uint64_t seed, const DirichletOptions& options = {});

}  // namespace lamptree
