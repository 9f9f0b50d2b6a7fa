#pragma once

#include <string>
#include <string_view>

#include "lamptree/wreath.hpp"

namespace lamptree {

// Canonical text forms used in CSV/JSON output:
//   word           "o" for the root, else syllables "factor:exponent" joined by '-'
//                  e.g. "0:1-2:-3"
//   configuration  "{}" or "{word=state;word=state}" in letter order
//   group element  "<configuration>@<word>"
//   boundary point "<configuration>@<word>..." (the word is the end prefix)

std::string format_word(const TreeVertex& x);
std::string format_configuration(const Configuration& c);
std::string format_element(const GroupElement& g);
std::string format_boundary_point(const BoundaryPoint& b);

/// Parses and reduces; throws ParseError on malformed text.
TreeVertex parse_word(const FreeProduct& base, std::string_view text);
Configuration parse_configuration(const Lamplighter& group, std::string_view text);
GroupElement parse_element(const Lamplighter& group, std::string_view text);
BoundaryPoint parse_boundary_point(const Lamplighter& group, std::string_view text);

}  // namespace lamptree
