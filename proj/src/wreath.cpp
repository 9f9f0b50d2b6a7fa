#include "lamptree/wreath.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

#include "lamptree/errors.hpp"

namespace lamptree {

Configuration::Configuration(int r) : r_(r) {
  if (r < 2) throw std::invalid_argument("lamp state count r must be >= 2");
}

Configuration Configuration::delta(int r, const TreeVertex& at, int state) {
  Configuration c(r);
  c.set(at, state);
  return c;
}

int Configuration::at(const TreeVertex& v) const {
  auto it = lamps_.find(v);
  return it == lamps_.end() ? 0 : it->second;
}

void Configuration::set(const TreeVertex& v, int state) {
  state %= r_;
  if (state < 0) state += r_;
  if (state == 0)
    lamps_.erase(v);
  else
    lamps_[v] = state;
}

void Configuration::add_at(const TreeVertex& v, int delta) {
  delta %= r_;
  if (delta < 0) delta += r_;
  if (delta == 0) return;
  auto [it, inserted] = lamps_.try_emplace(v, delta);
  if (inserted) return;
  it->second = (it->second + delta) % r_;
  if (it->second == 0) lamps_.erase(it);
}

std::vector<TreeVertex> Configuration::support() const {
  std::vector<TreeVertex> out;
  out.reserve(lamps_.size());
  for (const auto& [v, s] : lamps_) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<TreeVertex, int>> Configuration::sorted() const {
  std::vector<std::pair<TreeVertex, int>> out(lamps_.begin(), lamps_.end());
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  return out;
}

Configuration Configuration::negated() const {
  Configuration out(r_);
  for (const auto& [v, s] : lamps_) out.lamps_.emplace(v, r_ - s);
  return out;
}

Configuration Configuration::restricted_to_ball(std::size_t radius) const {
  Configuration out(r_);
  for (const auto& [v, s] : lamps_)
    if (v.length() <= radius) out.lamps_.emplace(v, s);
  return out;
}

std::size_t Configuration::hash() const {
  std::size_t h = static_cast<std::size_t>(r_);
  for (const auto& [v, s] : lamps_) h += (v.hash() ^ 0x7f4a7c15ULL) * (static_cast<std::size_t>(s) * 2 + 1);
  return h;
}

Lamplighter::Lamplighter(FreeProductSignature signature, int r) : base_(signature), r_(r) {
  if (r < 2) throw std::invalid_argument("lamp state count r must be >= 2");
}

void Lamplighter::check(const Configuration& c) const {
  if (c.r() != r_)
    throw ParameterMismatch("configuration has r=" + std::to_string(c.r()) + ", group has r=" +
                            std::to_string(r_));
}

Configuration Lamplighter::config_add(const Configuration& a, const Configuration& b) const {
  check(a);
  check(b);
  Configuration out = a;
  for (const auto& [v, s] : b.lamps()) out.add_at(v, s);
  return out;
}

Configuration Lamplighter::translate(const TreeVertex& x, const Configuration& eta) const {
  check(eta);
  Configuration out(r_);
  for (const auto& [v, s] : eta.lamps()) out.set(base_.mul(x, v), s);
  return out;
}

GroupElement Lamplighter::mul(const GroupElement& g, const GroupElement& h) const {
  check(g);
  check(h);
  GroupElement out{g.eta, base_.mul(g.x, h.x)};
  for (const auto& [v, s] : h.eta.lamps()) out.eta.add_at(base_.mul(g.x, v), s);
  return out;
}

GroupElement Lamplighter::inv(const GroupElement& g) const {
  check(g);
  TreeVertex xi = base_.inverse(g.x);
  return {translate(xi, g.eta).negated(), xi};
}

std::size_t Lamplighter::distance(const GroupElement& g, const GroupElement& h) const {
  check(g);
  check(h);
  // supp(eta' - eta): vertices where the two configurations disagree.
  std::vector<TreeVertex> diff;
  for (const auto& [v, s] : g.eta.lamps())
    if (h.eta.at(v) != s) diff.push_back(v);
  for (const auto& [v, s] : h.eta.lamps())
    if (g.eta.at(v) == 0) diff.push_back(v);
  return steiner_tour_length(g.x, h.x, diff) + diff.size();
}

BoundaryPoint Lamplighter::act(const GroupElement& g, const BoundaryPoint& beta) const {
  check(g);
  check(beta.zeta);
  const TreeVertex& p = beta.end.prefix();
  TreeVertex image = base_.mul(g.x, p);
  std::size_t cancelled = (g.x.length() + p.length() - image.length()) / 2;
  if (cancelled >= p.length())
    throw UnresolvedAtDepth("left multiplication cancels the whole end prefix (depth " +
                            std::to_string(p.length()) + "); need depth > " +
                            std::to_string(g.x.length()));
  return {config_add(g.eta, translate(g.x, beta.zeta)), EndPrefix(std::move(image))};
}

std::vector<GroupElement> Lamplighter::generators() const {
  std::vector<GroupElement> out;
  for (const auto& s : base_.generators()) out.push_back({zero(), s});
  for (int k = 1; k < r_; ++k) out.push_back({Configuration::delta(r_, TreeVertex{}, k), TreeVertex{}});
  return out;
}

std::vector<GroupElement> Lamplighter::graph_neighbors(const GroupElement& g) const {
  std::vector<GroupElement> out;
  for (const auto& y : base_.neighbors(g.x)) out.push_back({g.eta, y});
  int current = g.eta.at(g.x);
  for (int state = 0; state < r_; ++state) {
    if (state == current) continue;
    GroupElement h = g;
    h.eta.set(g.x, state);
    out.push_back(std::move(h));
  }
  return out;
}

std::unordered_map<GroupElement, std::size_t, GroupElementHash> Lamplighter::ball(
    std::size_t radius) const {
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> dist;
  std::deque<GroupElement> frontier;
  dist.emplace(identity(), 0);
  frontier.push_back(identity());
  while (!frontier.empty()) {
    GroupElement g = std::move(frontier.front());
    frontier.pop_front();
    std::size_t d = dist.at(g);
    if (d == radius) continue;
    for (auto& h : graph_neighbors(g)) {
      if (dist.contains(h)) continue;
      dist.emplace(h, d + 1);
      frontier.push_back(std::move(h));
    }
  }
  return dist;
}

}  // namespace lamptree
