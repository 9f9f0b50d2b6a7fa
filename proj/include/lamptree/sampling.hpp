#pragma once

#include <cstddef>

#include "lamptree/random.hpp"
#include "lamptree/wreath.hpp"

namespace lamptree {

// Random instances for property checks. Everything is driven by the caller's
// stream, so instance i of a batch is reproducible from its seed alone.

/// Uniform reduced word of exactly the given length.
TreeVertex random_vertex(const FreeProduct& base, Rng& rng, std::size_t length);

/// Uniform reduced word of length at most `max_length` (length itself uniform).
TreeVertex random_vertex_up_to(const FreeProduct& base, Rng& rng, std::size_t max_length);

/// Up to `lamps` lamps at random vertices of B(o, radius), random nonzero states.
Configuration random_configuration(const Lamplighter& group, Rng& rng, std::size_t radius, std::size_t lamps);

GroupElement random_element(const Lamplighter& group, Rng& rng, std::size_t max_length, std::size_t lamp_radius,
                            std::size_t lamps);

/// Lamps inside B(o, lamp_radius), end prefix of exactly `depth`.
BoundaryPoint random_boundary_point(const Lamplighter& group, Rng& rng, std::size_t depth, std::size_t lamp_radius,
                                    std::size_t lamps);

struct StripInstance {
  BoundaryPoint beta;
  BoundaryPoint beta_check;
  GroupElement g;
};

/// Two boundary points with distinct ends of the given depth and lamps in
/// B(o, lamp_radius), plus a group element whose base part has length at
/// most g_length.
StripInstance random_strip_instance(const Lamplighter& group, Rng& rng, std::size_t depth, std::size_t lamp_radius,
                                    std::size_t g_length);

}  // namespace lamptree
