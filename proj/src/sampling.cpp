#include "lamptree/sampling.hpp"

namespace lamptree {

TreeVertex random_vertex(const FreeProduct& base, Rng& rng, std::size_t length) {
  const auto& gens = base.generators();
  TreeVertex x;
  while (x.length() < length) {
    TreeVertex next = x;
    base.right_multiply(next, gens[uniform_below(rng, gens.size())]);
    if (next.length() > x.length()) x = std::move(next);
  }
  return x;
}

TreeVertex random_vertex_up_to(const FreeProduct& base, Rng& rng, std::size_t max_length) {
  return random_vertex(base, rng, uniform_below(rng, max_length + 1));
}

Configuration random_configuration(const Lamplighter& group, Rng& rng, std::size_t radius, std::size_t lamps) {
  Configuration c = group.zero();
  for (std::size_t i = 0; i < lamps; ++i) {
    TreeVertex v = random_vertex_up_to(group.base(), rng, radius);
    c.set(v, 1 + static_cast<int>(uniform_below(rng, group.r() - 1)));
  }
  return c;
}

GroupElement random_element(const Lamplighter& group, Rng& rng, std::size_t max_length, std::size_t lamp_radius,
                            std::size_t lamps) {
  Configuration eta = random_configuration(group, rng, lamp_radius, uniform_below(rng, lamps + 1));
  return {std::move(eta), random_vertex_up_to(group.base(), rng, max_length)};
}

BoundaryPoint random_boundary_point(const Lamplighter& group, Rng& rng, std::size_t depth, std::size_t lamp_radius,
                                    std::size_t lamps) {
  Configuration zeta = random_configuration(group, rng, lamp_radius, uniform_below(rng, lamps + 1));
  return {std::move(zeta), EndPrefix(random_vertex(group.base(), rng, depth))};
}

StripInstance random_strip_instance(const Lamplighter& group, Rng& rng, std::size_t depth, std::size_t lamp_radius,
                                    std::size_t g_length) {
  BoundaryPoint beta = random_boundary_point(group, rng, depth, lamp_radius, 4);
  BoundaryPoint beta_check = random_boundary_point(group, rng, depth, lamp_radius, 4);
  while (beta_check.end == beta.end) beta_check.end = EndPrefix(random_vertex(group.base(), rng, depth));
  GroupElement g = random_element(group, rng, g_length, g_length, 3);
  return {std::move(beta), std::move(beta_check), std::move(g)};
}

}  // namespace lamptree
