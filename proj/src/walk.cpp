#include "lamptree/walk.hpp"

#include <algorithm>

namespace lamptree {

Walker::Walker(const MeasureSpec& mu, GroupElement start) : mu_(&mu), state_(std::move(start)) {
  mu.group().check(state_);
}

const StepDelta& Walker::apply(std::size_t atom) {
  const GroupElement& inc = mu_->atoms()[atom].element;
  const FreeProduct& base = mu_->group().base();
  delta_.touched_depth.clear();
  for (const auto& [y, s] : inc.eta.lamps()) {
    if (y.is_root()) {
      state_.eta.add_at(state_.x, s);
      delta_.touched_depth.push_back(state_.x.length());
    } else {
      TreeVertex at = base.mul(state_.x, y);
      state_.eta.add_at(at, s);
      delta_.touched_depth.push_back(at.length());
    }
  }
  std::size_t before = state_.x.length();
  std::size_t cancelled = base.right_multiply(state_.x, inc.x);
  delta_.common_prefix = before - cancelled;
  return delta_;
}

IncrementSampler::IncrementSampler(const MeasureSpec& mu) {
  std::vector<double> w;
  for (const auto& a : mu.atoms()) {
    w.push_back(a.p);
    std::size_t m = 0;
    for (const auto& [y, s] : a.element.eta.lamps()) m = std::max(m, y.length());
    lamp_radius_.push_back(m);
  }
  table_ = AliasTable(w);
}

Trajectory run_trajectory(const MeasureSpec& mu, const GroupElement& g0, std::size_t n, std::uint64_t seed,
                          std::size_t checkpoint_stride) {
  IncrementSampler sampler(mu);
  Trajectory t;
  t.start = g0;
  t.seed = seed;
  t.checkpoint_stride = checkpoint_stride;
  t.increments.reserve(n);
  t.checkpoints.push_back(g0);
  t.final = simulate(mu, sampler, g0, n, seed, [&](std::size_t k, std::size_t atom, const Walker& w, const StepDelta&) {
    t.increments.push_back(static_cast<std::uint32_t>(atom));
    if (checkpoint_stride > 0 && k % checkpoint_stride == 0) t.checkpoints.push_back(w.state());
  });
  if (checkpoint_stride == 0 && n > 0) t.checkpoints.push_back(t.final);
  return t;
}

std::vector<GroupElement> Trajectory::steps(const MeasureSpec& mu) const {
  std::vector<GroupElement> out;
  out.reserve(increments.size() + 1);
  Walker w(mu, start);
  out.push_back(start);
  for (auto atom : increments) {
    w.apply(atom);
    out.push_back(w.state());
  }
  return out;
}

std::vector<std::size_t> increment_lamp_radius(const MeasureSpec& mu, const Trajectory& trajectory) {
  IncrementSampler sampler(mu);
  std::vector<std::size_t> out;
  out.reserve(trajectory.length());
  for (auto atom : trajectory.increments) out.push_back(sampler.lamp_radius(atom));
  return out;
}

}  // namespace lamptree
