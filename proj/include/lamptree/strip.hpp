#pragma once

#include <cstddef>
#include <vector>

#include "lamptree/wreath.hpp"

namespace lamptree {

struct StripQuery {
  BoundaryPoint beta;
  BoundaryPoint beta_check;
  std::size_t radius = 0;
};

/// Vertices y of the bi-infinite geodesic between the ends of the two
/// prefixes with d(o, y) <= radius, ordered from the u side to the v side.
/// Needs both prefixes deeper than `radius`.
std::vector<TreeVertex> geodesic_between_ends(const EndPrefix& u, const EndPrefix& v, std::size_t radius);

/// (eta_y, y), where eta_y agrees with zeta on T_y(v) and with zeta_check
/// elsewhere; v is the end of beta_check.
GroupElement build_strip_point(const Lamplighter& group, const BoundaryPoint& beta,
                               const BoundaryPoint& beta_check, const TreeVertex& y);

/// Strip elements (eta_y, y) with y on the geodesic and d(o, y) <= radius.
/// At most 2 radius + 1 of them.
std::vector<GroupElement> strip_points_in_ball(const Lamplighter& group, const StripQuery& query);

/// Checks g S(beta, beta_check) = S(g beta, g beta_check) on the part of the
/// strips that both finite computations cover.
bool verify_strip_equivariance(const Lamplighter& group, const GroupElement& g, const BoundaryPoint& beta,
                               const BoundaryPoint& beta_check, std::size_t radius);

}  // namespace lamptree
