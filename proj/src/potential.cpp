#include "lamptree/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lamptree/errors.hpp"
#include "lamptree/parallel.hpp"

namespace lamptree {

KernelEstimate estimate_green(const TreeMeasure& mu_tilde, const TreeVertex& x, const TreeVertex& y,
                              std::size_t N, std::size_t horizon, std::uint64_t seed, unsigned workers) {
  std::vector<double> weights;
  for (const auto& a : mu_tilde.atoms()) weights.push_back(a.p);
  const AliasTable table(weights);
  const FreeProduct& base = mu_tilde.base();
  const auto& atoms = mu_tilde.atoms();
  const std::size_t half = horizon / 2;

  auto counts = parallel_map(N, workers, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    TreeVertex pos = x;
    std::array<double, 2> visits{};
    if (pos == y) visits = {1.0, 1.0};
    for (std::size_t n = 1; n <= horizon; ++n) {
      base.right_multiply(pos, atoms[table.sample(rng)].x);
      if (pos == y) {
        visits[0] += 1.0;
        if (n <= half) visits[1] += 1.0;
      }
    }
    return visits;
  });

  std::vector<double> g_full, g_half, f_full, f_half;
  for (const auto& c : counts) {
    g_full.push_back(c[0]);
    g_half.push_back(c[1]);
    f_full.push_back(c[0] > 0 ? 1.0 : 0.0);
    f_half.push_back(c[1] > 0 ? 1.0 : 0.0);
  }
  auto gf = mean_and_error(g_full), gh = mean_and_error(g_half);
  auto ff = mean_and_error(f_full), fh = mean_and_error(f_half);

  KernelEstimate k;
  k.x = x;
  k.y = y;
  k.G_hat = gf.mean;
  k.G_se = gf.std_err;
  k.F_hat = ff.mean;
  k.F_se = ff.std_err;
  k.G_half = gh.mean;
  k.G_half_se = gh.std_err;
  k.F_half = fh.mean;
  k.F_half_se = fh.std_err;
  k.truncation_bias = std::abs(k.G_hat - k.G_half) > 2.0 * std::hypot(k.G_se, k.G_half_se);
  k.N = N;
  k.horizon = horizon;
  return k;
}

std::vector<DecayRow> green_decay_profile(const TreeMeasure& mu_tilde, std::span<const std::size_t> distances,
                                          std::size_t N, std::size_t horizon, std::uint64_t seed,
                                          unsigned workers) {
  std::vector<DecayRow> out;
  for (std::size_t d : distances) {
    TreeVertex target = mu_tilde.base().ray_vertex(d);
    out.push_back({d, estimate_green(mu_tilde, TreeVertex{}, target, N, horizon, derive_seed(seed, d), workers)});
  }
  return out;
}

BoundaryFunction::BoundaryFunction(std::size_t depth, std::vector<TreeVertex> window, double default_value)
    : depth_(depth), window_(std::move(window)), default_(default_value) {
  auto sorted = window_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("boundary function window has repeated vertices");
}

BoundaryFunction BoundaryFunction::constant(double value) { return BoundaryFunction(0, {}, value); }

BoundaryFunction BoundaryFunction::indicator(const EndPrefix& prefix, std::vector<std::pair<TreeVertex, int>> lamps) {
  std::vector<TreeVertex> window;
  std::vector<int> states;
  for (auto& [v, s] : lamps) {
    window.push_back(v);
    states.push_back(s);
  }
  BoundaryFunction f(prefix.depth(), std::move(window), 0.0);
  f.set(prefix.prefix(), std::move(states), 1.0);
  return f;
}

std::size_t BoundaryFunction::window_radius() const {
  std::size_t r = 0;
  for (const auto& v : window_) r = std::max(r, v.length());
  return r;
}

void BoundaryFunction::set(TreeVertex prefix, std::vector<int> lamps, double value) {
  if (prefix.length() != depth_)
    throw std::invalid_argument("boundary function entry prefix must have length " + std::to_string(depth_));
  if (lamps.size() != window_.size())
    throw std::invalid_argument("boundary function entry needs one lamp state per window vertex");
  table_[{std::move(prefix), std::move(lamps)}] = value;
}

double BoundaryFunction::value(const TreeVertex& prefix, const std::vector<int>& lamps) const {
  auto it = table_.find({prefix, lamps});
  return it == table_.end() ? default_ : it->second;
}

double BoundaryFunction::operator()(const TreeVertex& end_prefix, const Configuration& zeta) const {
  if (end_prefix.length() < depth_)
    throw UnresolvedAtDepth("boundary function needs end depth >= " + std::to_string(depth_));
  std::vector<int> lamps;
  lamps.reserve(window_.size());
  for (const auto& v : window_) lamps.push_back(zeta.at(v));
  return value(prefix(end_prefix, depth_), lamps);
}

double BoundaryFunction::operator()(const BoundaryPoint& beta) const { return (*this)(beta.end.prefix(), beta.zeta); }

std::optional<double> BoundaryFunction::evaluate(const ConvergenceRecord& record) const {
  if (depth_ > 0 && !record.prefix_stable(depth_)) return std::nullopt;
  if (!window_.empty() && !record.lamps_stable(window_radius())) return std::nullopt;
  const TreeVertex root;
  const TreeVertex& end = depth_ > 0 ? record.end_prefix->prefix() : root;
  return (*this)(end, record.frozen_config);
}

double BoundaryFunction::min_value() const {
  double m = default_;
  for (const auto& [k, v] : table_) m = std::min(m, v);
  return m;
}

double BoundaryFunction::max_value() const {
  double m = default_;
  for (const auto& [k, v] : table_) m = std::max(m, v);
  return m;
}

BoundaryFunction translate(const Lamplighter& group, const GroupElement& g, const BoundaryFunction& f) {
  const FreeProduct& base = group.base();
  const std::size_t depth = f.depth() > 0 ? f.depth() + g.x.length() : 0;
  const TreeVertex x_inv = base.inverse(g.x);
  std::vector<TreeVertex> window;
  for (const auto& a : f.window()) window.push_back(base.mul(x_inv, a));

  auto prefixes = base.sphere(depth);
  double combos = 1.0;
  for (std::size_t i = 0; i < window.size(); ++i) combos *= group.r();
  if (combos * static_cast<double>(prefixes.size()) > 4e6)
    throw std::length_error("translated boundary function table too large");

  BoundaryFunction out(depth, window, f.default_value());
  std::vector<int> lamps(window.size(), 0);
  std::vector<int> image(window.size(), 0);
  for (const auto& p : prefixes) {
    TreeVertex end_image = base.mul(g.x, p);
    TreeVertex head = prefix(end_image, f.depth());
    std::fill(lamps.begin(), lamps.end(), 0);
    while (true) {
      for (std::size_t i = 0; i < window.size(); ++i)
        image[i] = (g.eta.at(f.window()[i]) + lamps[i]) % group.r();
      double v = f.value(head, image);
      if (v != f.default_value()) out.set(p, lamps, v);
      std::size_t i = 0;
      while (i < lamps.size() && ++lamps[i] == group.r()) lamps[i++] = 0;
      if (i == lamps.size()) break;
    }
  }
  return out;
}

HarmonicValue dirichlet_estimate(const MeasureSpec& mu, const BoundaryFunction& f, const GroupElement& g,
                                 std::size_t N, std::uint64_t seed, const DirichletOptions& options) {
  HarmonicValue out;
  if (f.depth() == 0 && f.window().empty()) {
    // Constant function: every trajectory is decided without simulation.
    out.h_hat = out.lower = out.upper = f.default_value();
    out.determinate = N;
    return out;
  }
  const std::size_t max_depth = std::max(f.depth(), f.window_radius());
  auto records = sample_limits(mu, g, N, options.horizon, seed, max_depth,
                               RunOptions{options.final_fraction, options.workers});
  std::vector<double> values;
  values.reserve(N);
  for (const auto& rec : records) {
    if (auto v = f.evaluate(rec))
      values.push_back(*v);
    else
      ++out.indeterminate;
  }
  out.determinate = values.size();
  auto me = mean_and_error(values);
  out.h_hat = values.empty() ? std::nan("") : me.mean;
  out.std_err = me.std_err;
  out.lower = out.upper = out.h_hat;
  if (options.policy == IndeterminatePolicy::bounds && N > 0) {
    double sum = me.mean * static_cast<double>(values.size());
    if (values.empty()) sum = 0.0;
    const double ind = static_cast<double>(out.indeterminate);
    out.lower = (sum + ind * f.min_value()) / static_cast<double>(N);
    out.upper = (sum + ind * f.max_value()) / static_cast<double>(N);
  }
  return out;
}

std::vector<SequenceRow> dirichlet_boundary_convergence(const MeasureSpec& mu, const BoundaryFunction& f,
                                                        const BoundaryPoint& beta, const SequenceSpec& spec,
                                                        std::size_t N, std::uint64_t seed,
                                                        const DirichletOptions& options) {
  std::vector<SequenceRow> rows;
  for (std::size_t k : spec.depths) {
    if (k > beta.end.depth())
      throw UnresolvedAtDepth("sequence depth " + std::to_string(k) + " exceeds the end prefix depth");
    GroupElement g{beta.zeta.restricted_to_ball(k), prefix(beta.end.prefix(), k)};
    HarmonicValue v = dirichlet_estimate(mu, f, g, N, derive_seed(seed, k), options);
    rows.push_back({k, std::move(g), v});
  }
  return rows;
}

Residual mean_value_residual(const MeasureSpec& mu, const BoundaryFunction& f, const GroupElement& g,
                             std::size_t N, std::uint64_t seed, const DirichletOptions& options) {
  HarmonicValue center = dirichlet_estimate(mu, f, g, N, derive_seed(seed, 0), options);
  double average = 0.0;
  double var = center.std_err * center.std_err;
  const auto& atoms = mu.atoms();
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    GroupElement next = mu.group().mul(g, atoms[j].element);
    HarmonicValue h = dirichlet_estimate(mu, f, next, N, derive_seed(seed, j + 1), options);
    average += atoms[j].p * h.h_hat;
    var += atoms[j].p * atoms[j].p * h.std_err * h.std_err;
  }
  return {std::abs(center.h_hat - average), std::sqrt(var), center.h_hat, average};
}

}  // namespace lamptree
