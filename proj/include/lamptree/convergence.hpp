#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lamptree/walk.hpp"

namespace lamptree {

inline constexpr double kDefaultFinalFraction = 0.25;

/// Finite-horizon evidence of convergence Z_n -> Z_inf.
///
/// A depth-k prefix of X_n (or the lamp set in B(o,k)) is "stable" when it
/// did not change during the final `final_fraction` of the horizon.
struct ConvergenceRecord {
  std::size_t horizon = 0;
  double final_fraction = kDefaultFinalFraction;
  std::size_t max_depth = 0;

  /// Deepest stable prefix depth (0 when not even depth 1 is stable).
  std::size_t prefix_depth = 0;
  /// Largest k with all lamps in B(o,k) stable, or -1.
  int lamp_radius = -1;
  /// Stable prefix of X at depth prefix_depth.
  std::optional<EndPrefix> end_prefix;
  /// Final lamps inside B(o, lamp_radius).
  Configuration frozen_config{2};

  /// Index k-1: last time the depth-k prefix of X changed.
  std::vector<std::size_t> prefix_change;
  /// Index k: last time a lamp at distance exactly k from o changed.
  std::vector<std::size_t> lamp_change;

  bool stabilized() const { return prefix_depth >= 1; }
  std::size_t window_start() const;
  /// First time after which neither the depth-k prefix nor any lamp in
  /// B(o,k) changed again within the horizon.
  std::size_t stabilization_time(std::size_t k) const;
  bool prefix_stable(std::size_t k) const { return k >= 1 && k <= prefix_depth; }
  bool lamps_stable(std::size_t k) const { return lamp_radius >= 0 && k <= static_cast<std::size_t>(lamp_radius); }
};

/// Online tracker fed with the step deltas of a Walker.
class ConvergenceTracker {
 public:
  ConvergenceTracker(std::size_t max_depth, const GroupElement& start);

  void observe(std::size_t step, const GroupElement& state, const StepDelta& delta);
  ConvergenceRecord finish(const GroupElement& final, std::size_t horizon,
                           double final_fraction = kDefaultFinalFraction) const;

 private:
  std::size_t max_depth_;
  std::size_t previous_length_;
  std::vector<std::size_t> prefix_change_;
  std::vector<std::size_t> lamp_change_;
};

/// Replays a stored trajectory; tracks depths up to max(depths).
ConvergenceRecord detect_convergence(const MeasureSpec& mu, const Trajectory& trajectory,
                                     std::span<const std::size_t> depths,
                                     double final_fraction = kDefaultFinalFraction);

struct RunOptions {
  double final_fraction = kDefaultFinalFraction;
  unsigned workers = 1;
};

/// N independent trajectories from `start`, stream i seeded with
/// derive_seed(seed, i); one record each, in index order.
std::vector<ConvergenceRecord> sample_limits(const MeasureSpec& mu, const GroupElement& start, std::size_t N,
                                             std::size_t horizon, std::uint64_t seed, std::size_t max_depth,
                                             const RunOptions& options = {});

/// Cylinder {end passes through end_prefix} x {zeta = given states on a window}.
struct CylinderEvent {
  EndPrefix end_prefix;
  std::vector<std::pair<TreeVertex, int>> lamp_window;

  std::size_t window_radius() const;
  /// Depth the trajectory must resolve before the event can be decided.
  std::size_t required_depth() const;
  /// nullopt when the record is not resolved deeply enough.
  std::optional<bool> decide(const ConvergenceRecord& record) const;
};

struct EventEstimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  std::size_t hits = 0;
  std::size_t indeterminate = 0;
};

struct HarmonicEstimate {
  std::size_t trajectories = 0;
  std::size_t not_stabilized = 0;
  std::vector<EventEstimate> events;
};

/// Empirical law of Z_inf (walk started at id) on the given cylinders.
/// Trajectories that cannot decide an event count as indeterminate for it.
HarmonicEstimate estimate_harmonic_measure(const MeasureSpec& mu, std::span<const CylinderEvent> events,
                                           std::size_t N, std::size_t horizon, std::uint64_t seed,
                                           const RunOptions& options = {});

/// All (q+1) q^{k-1} cylinders of depth k, without lamp constraints.
std::vector<CylinderEvent> end_cylinders(const FreeProduct& base, std::size_t depth);

struct EscapeEstimate {
  std::size_t n = 0;
  std::size_t trajectories = 0;
  double ell_hat = 0.0;
  double ell_se = 0.0;
  double m_hat = 0.0;
  double m_se = 0.0;
};

/// Means of d(Z_n, Z_0)/n and d(X_n, X_0)/n over N walks from id.
EscapeEstimate escape_rates(const MeasureSpec& mu, std::size_t n, std::size_t N, std::uint64_t seed,
                            unsigned workers = 1);

struct MeanAndError {
  double mean = 0.0;
  double std_err = 0.0;
};
MeanAndError mean_and_error(std::span<const double> values);

}  // namespace lamptree
