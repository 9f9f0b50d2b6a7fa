#include "lamptree/measure.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_set>

namespace lamptree {

MeasureSpec::MeasureSpec(Lamplighter group, std::vector<Atom> atoms, std::string label)
    : group_(std::move(group)), atoms_(std::move(atoms)), label_(std::move(label)) {
  if (atoms_.empty()) throw std::invalid_argument("measure has no atoms");
  double total = 0.0;
  std::unordered_set<GroupElement, GroupElementHash> seen;
  for (const auto& a : atoms_) {
    group_.check(a.element);
    if (!(a.p > 0.0) || !std::isfinite(a.p)) throw std::invalid_argument("atom masses must be positive");
    if (!seen.insert(a.element).second) throw std::invalid_argument("measure atoms must be distinct");
    total += a.p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("atom masses sum to " + std::to_string(total) + ", expected 1");
}

TreeMeasure::TreeMeasure(FreeProduct base, std::vector<TreeAtom> atoms)
    : base_(std::move(base)), atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("tree measure has no atoms");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.p > 0.0)) throw std::invalid_argument("tree atom masses must be positive");
    total += a.p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("tree measure masses do not sum to 1");
}

double TreeMeasure::mass(const TreeVertex& x) const {
  for (const auto& a : atoms_)
    if (a.x == x) return a.p;
  return 0.0;
}

MeasureSpec basic_walk(FreeProductSignature signature, int r, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("basic walk needs 0 < theta < 1");
  Lamplighter group(signature, r);
  std::vector<Atom> atoms;
  const double move = theta / (group.q() + 1);
  const double sw = (1.0 - theta) / (r - 1);
  for (const auto& s : group.base().generators()) atoms.push_back({{group.zero(), s}, move});
  for (int k = 1; k < r; ++k) atoms.push_back({{Configuration::delta(r, TreeVertex{}, k), TreeVertex{}}, sw});
  return MeasureSpec(std::move(group), std::move(atoms), "basic(theta=" + std::to_string(theta) + ")");
}

MeasureSpec walk_only(FreeProductSignature signature, int r) {
  Lamplighter group(signature, r);
  std::vector<Atom> atoms;
  const double move = 1.0 / (group.q() + 1);
  for (const auto& s : group.base().generators()) atoms.push_back({{group.zero(), s}, move});
  return MeasureSpec(std::move(group), std::move(atoms), "walk-only");
}

MeasureSpec point_mass(const Lamplighter& group, const GroupElement& g) {
  return MeasureSpec(group, {{g, 1.0}}, "point-mass");
}

TreeMeasure simple_random_walk(const FreeProduct& base) {
  std::vector<TreeAtom> atoms;
  for (const auto& s : base.generators()) atoms.push_back({s, 1.0 / (base.q() + 1)});
  return TreeMeasure(base, std::move(atoms));
}

TreeMeasure project_measure(const MeasureSpec& mu) {
  std::vector<TreeAtom> atoms;
  for (const auto& a : mu.atoms()) {
    auto it = std::find_if(atoms.begin(), atoms.end(), [&](const TreeAtom& t) { return t.x == a.element.x; });
    if (it == atoms.end())
      atoms.push_back({a.element.x, a.p});
    else
      it->p += a.p;
  }
  return TreeMeasure(mu.group().base(), std::move(atoms));
}

std::size_t bounded_range(const MeasureSpec& mu) {
  std::size_t range = 0;
  for (const auto& a : mu.atoms())
    for (const auto& [y, s] : a.element.eta.lamps())
      range = std::max(range, std::min(y.length(), tree_distance(y, a.element.x)));
  return range;
}

TruncatedMeasure truncate_lamp_range(const Lamplighter& group, std::vector<Atom> atoms, std::size_t max_range,
                                     std::string label) {
  double listed = 0.0;
  std::vector<Atom> kept;
  for (auto& a : atoms) {
    if (!(a.p > 0.0) || !std::isfinite(a.p)) throw std::invalid_argument("atom masses must be positive");
    listed += a.p;
    bool within = true;
    for (const auto& [y, s] : a.element.eta.lamps())
      within = within && std::min(y.length(), tree_distance(y, a.element.x)) <= max_range;
    if (within) kept.push_back(std::move(a));
  }
  if (listed > 1.0 + 1e-12) throw std::invalid_argument("listed atom masses exceed 1");
  double total = 0.0;
  for (const auto& a : kept) total += a.p;
  if (kept.empty() || !(total > 0.0)) throw std::invalid_argument("truncation removes every atom");
  for (auto& a : kept) a.p /= total;
  return {MeasureSpec(group, std::move(kept), std::move(label)), max_range, std::max(0.0, 1.0 - total)};
}

double first_moment(const MeasureSpec& mu) {
  const auto id = mu.group().identity();
  double m = 0.0;
  for (const auto& a : mu.atoms()) m += static_cast<double>(mu.group().distance(id, a.element)) * a.p;
  return m;
}

GenerationReport check_semigroup_generation(const MeasureSpec& mu, std::size_t radius, int slack) {
  if (radius > kMaxGenerationRadius)
    throw std::invalid_argument("generation check radius exceeds cap " + std::to_string(kMaxGenerationRadius));
  const auto& group = mu.group();
  const auto id = group.identity();
  std::size_t extra = 0;
  if (slack < 0) {
    for (const auto& a : mu.atoms()) extra = std::max(extra, group.distance(id, a.element));
  } else {
    extra = static_cast<std::size_t>(slack);
  }
  const std::size_t limit = radius + extra;

  std::unordered_set<GroupElement, GroupElementHash> reached{id};
  std::deque<GroupElement> frontier{id};
  while (!frontier.empty()) {
    GroupElement g = std::move(frontier.front());
    frontier.pop_front();
    for (const auto& a : mu.atoms()) {
      GroupElement h = group.mul(g, a.element);
      if (group.distance(id, h) > limit || reached.contains(h)) continue;
      reached.insert(h);
      frontier.push_back(std::move(h));
    }
  }

  GenerationReport report;
  auto ball = group.ball(radius);
  report.ball_size = ball.size();
  for (const auto& [g, d] : ball)
    if (!reached.contains(g)) report.unreached.push_back(g);
  std::sort(report.unreached.begin(), report.unreached.end(), [](const GroupElement& l, const GroupElement& r) {
    if (l.x != r.x) return l.x < r.x;
    return l.eta.sorted() < r.eta.sorted();
  });
  report.generates_ball = report.unreached.empty();
  return report;
}

}  // namespace lamptree
