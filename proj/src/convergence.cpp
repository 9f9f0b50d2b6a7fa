#include "lamptree/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lamptree/parallel.hpp"

namespace lamptree {

std::size_t ConvergenceRecord::window_start() const {
  return horizon - static_cast<std::size_t>(std::floor(final_fraction * static_cast<double>(horizon)));
}

std::size_t ConvergenceRecord::stabilization_time(std::size_t k) const {
  if (k == 0 || k > max_depth) throw std::out_of_range("stabilization_time: depth outside tracked range");
  std::size_t t = prefix_change[k - 1];
  for (std::size_t j = 0; j <= k; ++j) t = std::max(t, lamp_change[j]);
  return t;
}

ConvergenceTracker::ConvergenceTracker(std::size_t max_depth, const GroupElement& start)
    : max_depth_(max_depth),
      previous_length_(start.x.length()),
      prefix_change_(max_depth, 0),
      lamp_change_(max_depth + 1, 0) {}

void ConvergenceTracker::observe(std::size_t step, const GroupElement& state, const StepDelta& delta) {
  std::size_t now = state.x.length();
  std::size_t hi = std::min(std::max(previous_length_, now), max_depth_);
  for (std::size_t k = delta.common_prefix + 1; k <= hi; ++k) prefix_change_[k - 1] = step;
  previous_length_ = now;
  for (std::size_t d : delta.touched_depth)
    if (d <= max_depth_) lamp_change_[d] = step;
}

ConvergenceRecord ConvergenceTracker::finish(const GroupElement& final, std::size_t horizon,
                                             double final_fraction) const {
  if (!(final_fraction > 0.0 && final_fraction < 1.0))
    throw std::invalid_argument("final fraction must lie in (0, 1)");
  ConvergenceRecord rec;
  rec.horizon = horizon;
  rec.final_fraction = final_fraction;
  rec.max_depth = max_depth_;
  rec.prefix_change = prefix_change_;
  rec.lamp_change = lamp_change_;
  const std::size_t ws = rec.window_start();

  std::size_t depth = 0;
  while (depth < max_depth_ && depth < final.x.length() && prefix_change_[depth] <= ws) ++depth;
  rec.prefix_depth = depth;
  if (depth > 0) rec.end_prefix.emplace(prefix(final.x, depth));

  int radius = -1;
  while (radius < static_cast<int>(max_depth_) && lamp_change_[static_cast<std::size_t>(radius + 1)] <= ws) ++radius;
  rec.lamp_radius = radius;
  rec.frozen_config = radius >= 0 ? final.eta.restricted_to_ball(static_cast<std::size_t>(radius))
                                  : Configuration(final.eta.r());
  return rec;
}

ConvergenceRecord detect_convergence(const MeasureSpec& mu, const Trajectory& trajectory,
                                     std::span<const std::size_t> depths, double final_fraction) {
  std::size_t max_depth = depths.empty() ? 1 : *std::max_element(depths.begin(), depths.end());
  ConvergenceTracker tracker(max_depth, trajectory.start);
  Walker walker(mu, trajectory.start);
  std::size_t step = 0;
  for (auto atom : trajectory.increments) {
    const StepDelta& d = walker.apply(atom);
    tracker.observe(++step, walker.state(), d);
  }
  return tracker.finish(walker.state(), trajectory.length(), final_fraction);
}

std::vector<ConvergenceRecord> sample_limits(const MeasureSpec& mu, const GroupElement& start, std::size_t N,
                                             std::size_t horizon, std::uint64_t seed, std::size_t max_depth,
                                             const RunOptions& options) {
  IncrementSampler sampler(mu);
  return parallel_map(N, options.workers, [&](std::size_t i) {
    ConvergenceTracker tracker(max_depth, start);
    GroupElement final = simulate(mu, sampler, start, horizon, derive_seed(seed, i),
                                  [&](std::size_t k, std::size_t, const Walker& w, const StepDelta& d) {
                                    tracker.observe(k, w.state(), d);
                                  });
    return tracker.finish(final, horizon, options.final_fraction);
  });
}

std::size_t CylinderEvent::window_radius() const {
  std::size_t r = 0;
  for (const auto& [v, s] : lamp_window) r = std::max(r, v.length());
  return r;
}

std::size_t CylinderEvent::required_depth() const { return std::max(end_prefix.depth(), window_radius()); }

std::optional<bool> CylinderEvent::decide(const ConvergenceRecord& record) const {
  if (!record.prefix_stable(end_prefix.depth())) return std::nullopt;
  if (!lamp_window.empty() && !record.lamps_stable(window_radius())) return std::nullopt;
  if (!is_prefix(end_prefix.prefix(), record.end_prefix->prefix())) return false;
  for (const auto& [v, s] : lamp_window)
    if (record.frozen_config.at(v) != s) return false;
  return true;
}

HarmonicEstimate estimate_harmonic_measure(const MeasureSpec& mu, std::span<const CylinderEvent> events,
                                           std::size_t N, std::size_t horizon, std::uint64_t seed,
                                           const RunOptions& options) {
  std::size_t depth = 1;
  for (const auto& e : events) depth = std::max(depth, e.required_depth());
  auto records = sample_limits(mu, mu.group().identity(), N, horizon, seed, depth, options);

  HarmonicEstimate out;
  out.trajectories = N;
  out.events.resize(events.size());
  for (const auto& rec : records) {
    if (!rec.stabilized()) ++out.not_stabilized;
    for (std::size_t j = 0; j < events.size(); ++j) {
      auto verdict = events[j].decide(rec);
      if (!verdict)
        ++out.events[j].indeterminate;
      else if (*verdict)
        ++out.events[j].hits;
    }
  }
  for (auto& e : out.events) {
    double p = N ? static_cast<double>(e.hits) / static_cast<double>(N) : 0.0;
    e.p_hat = p;
    e.std_err = N ? std::sqrt(p * (1.0 - p) / static_cast<double>(N)) : 0.0;
  }
  return out;
}

std::vector<CylinderEvent> end_cylinders(const FreeProduct& base, std::size_t depth) {
  std::vector<CylinderEvent> out;
  for (auto& v : base.sphere(depth)) out.push_back({EndPrefix(std::move(v)), {}});
  return out;
}

MeanAndError mean_and_error(std::span<const double> values) {
  MeanAndError out;
  const auto n = static_cast<double>(values.size());
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / n;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.std_err = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

EscapeEstimate escape_rates(const MeasureSpec& mu, std::size_t n, std::size_t N, std::uint64_t seed,
                            unsigned workers) {
  if (n == 0) throw std::invalid_argument("escape rates need n >= 1");
  IncrementSampler sampler(mu);
  const auto id = mu.group().identity();
  auto per_walk = parallel_map(N, workers, [&](std::size_t i) {
    GroupElement z = simulate(mu, sampler, id, n, derive_seed(seed, i),
                              [](std::size_t, std::size_t, const Walker&, const StepDelta&) {});
    return std::pair<double, double>(static_cast<double>(mu.group().distance(id, z)) / static_cast<double>(n),
                                     static_cast<double>(z.x.length()) / static_cast<double>(n));
  });
  std::vector<double> ell, m;
  for (const auto& [l, x] : per_walk) {
    ell.push_back(l);
    m.push_back(x);
  }
  auto le = mean_and_error(ell);
  auto me = mean_and_error(m);
  return {n, N, le.mean, le.std_err, me.mean, me.std_err};
}

}  // namespace lamptree
