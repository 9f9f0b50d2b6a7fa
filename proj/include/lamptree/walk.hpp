#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lamptree/measure.hpp"
#include "lamptree/random.hpp"

namespace lamptree {

/// What one increment did to the running product.
struct StepDelta {
  /// Common prefix length of X_{n-1} and X_n.
  std::size_t common_prefix = 0;
  /// d(o, X_{n-1} y) for each lamp y the increment touched.
  std::vector<std::size_t> touched_depth;
};

/// Running product Z_n = g0 g_1 ... g_n, updated in place.
class Walker {
 public:
  Walker(const MeasureSpec& mu, GroupElement start);

  const GroupElement& state() const { return state_; }
  /// Z <- Z * atom; the returned reference is valid until the next call.
  const StepDelta& apply(std::size_t atom);

 private:
  const MeasureSpec* mu_;
  GroupElement state_;
  StepDelta delta_;
};

/// Sampler bundle for a measure: the atom alias table plus per-atom
/// M = max{d(y,o) : y in supp(eta)} used for lamp-radius statistics.
class IncrementSampler {
 public:
  explicit IncrementSampler(const MeasureSpec& mu);
  std::size_t sample(Rng& rng) const { return table_.sample(rng); }
  std::size_t lamp_radius(std::size_t atom) const { return lamp_radius_[atom]; }

 private:
  AliasTable table_;
  std::vector<std::size_t> lamp_radius_;
};

/// Runs n steps from g0 on the stream `seed`, calling
/// observer(step, atom, walker, delta) after each step (step counts from 1).
template <class Observer>
GroupElement simulate(const MeasureSpec& mu, const IncrementSampler& sampler, GroupElement g0, std::size_t n,
                      std::uint64_t seed, Observer&& observer) {
  Rng rng(seed);
  Walker walker(mu, std::move(g0));
  for (std::size_t k = 1; k <= n; ++k) {
    std::size_t atom = sampler.sample(rng);
    const StepDelta& delta = walker.apply(atom);
    observer(k, atom, walker, delta);
  }
  return walker.state();
}

/// Trajectory record. Increments are stored as atom indices of the measure
/// that generated them; running products are kept every `checkpoint_stride`
/// steps (stride 1 keeps all of Z_0..Z_n, stride 0 only Z_0 and Z_n).
struct Trajectory {
  GroupElement start;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> increments;
  std::size_t checkpoint_stride = 1;
  std::vector<GroupElement> checkpoints;
  GroupElement final;

  std::size_t length() const { return increments.size(); }
  /// Replays all running products Z_0..Z_n.
  std::vector<GroupElement> steps(const MeasureSpec& mu) const;
};

Trajectory run_trajectory(const MeasureSpec& mu, const GroupElement& g0, std::size_t n, std::uint64_t seed,
                          std::size_t checkpoint_stride = 1);

/// M_n = max{d(y,o) : y in supp(increment_n)}, 0 for lamp-free increments.
std::vector<std::size_t> increment_lamp_radius(const MeasureSpec& mu, const Trajectory& trajectory);

}  // namespace lamptree
