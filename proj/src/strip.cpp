#include "lamptree/strip.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "lamptree/errors.hpp"

namespace lamptree {

std::vector<TreeVertex> geodesic_between_ends(const EndPrefix& u, const EndPrefix& v, std::size_t radius) {
  if (u.depth() <= radius || v.depth() <= radius)
    throw UnresolvedAtDepth("strip in ball of radius " + std::to_string(radius) + " needs end depths > radius");
  TreeVertex c = confluent(u, v);
  std::vector<TreeVertex> out;
  if (c.length() > radius) return out;
  for (std::size_t k = radius; k > c.length(); --k) out.push_back(prefix(u.prefix(), k));
  out.push_back(c);
  for (std::size_t k = c.length() + 1; k <= radius; ++k) out.push_back(prefix(v.prefix(), k));
  return out;
}

namespace {

void require_on_geodesic(const EndPrefix& u, const EndPrefix& v, const TreeVertex& y) {
  TreeVertex c = confluent(u, v);
  if (!is_prefix(c, y)) throw YNotOnGeodesic("y is not below the confluent of the two ends");
  if (is_prefix(y, u.prefix()) || is_prefix(y, v.prefix())) return;
  if (is_prefix(u.prefix(), y) || is_prefix(v.prefix(), y))
    throw UnresolvedAtDepth("y lies beyond the resolved part of the end prefixes");
  throw YNotOnGeodesic("y is not on the geodesic between the two ends");
}

}  // namespace

GroupElement build_strip_point(const Lamplighter& group, const BoundaryPoint& beta,
                               const BoundaryPoint& beta_check, const TreeVertex& y) {
  group.check(beta.zeta);
  group.check(beta_check.zeta);
  const EndPrefix& v = beta_check.end;
  require_on_geodesic(beta.end, v, y);

  Configuration eta = group.zero();
  for (const auto& [w, s] : beta.zeta.lamps())
    if (w != y && subtree_member(y, v, w)) eta.set(w, s);
  for (const auto& [w, s] : beta_check.zeta.lamps())
    if (w == y || !subtree_member(y, v, w)) eta.set(w, s);
  return {std::move(eta), y};
}

std::vector<GroupElement> strip_points_in_ball(const Lamplighter& group, const StripQuery& query) {
  std::vector<GroupElement> out;
  for (const auto& y : geodesic_between_ends(query.beta.end, query.beta_check.end, query.radius))
    out.push_back(build_strip_point(group, query.beta, query.beta_check, y));
  return out;
}

bool verify_strip_equivariance(const Lamplighter& group, const GroupElement& g, const BoundaryPoint& beta,
                               const BoundaryPoint& beta_check, std::size_t radius) {
  const FreeProduct& base = group.base();
  auto strip = strip_points_in_ball(group, {beta, beta_check, radius});

  BoundaryPoint g_beta = group.act(g, beta);
  BoundaryPoint g_beta_check = group.act(g, beta_check);
  std::size_t image_depth = std::min(g_beta.end.depth(), g_beta_check.end.depth());
  if (image_depth == 0) return false;
  std::size_t image_radius = image_depth - 1;
  auto image_strip = strip_points_in_ball(group, {g_beta, g_beta_check, image_radius});

  const TreeVertex x_inv = base.inverse(g.x);
  std::unordered_set<GroupElement, GroupElementHash> left, right;
  for (const auto& s : strip) {
    GroupElement moved = group.mul(g, s);
    if (moved.x.length() <= image_radius) left.insert(std::move(moved));
  }
  for (auto& s : image_strip)
    if (base.mul(x_inv, s.x).length() <= radius) right.insert(std::move(s));
  return left == right;
}

}  // namespace lamptree
