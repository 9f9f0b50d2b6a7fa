#include "lamptree/text.hpp"

#include <cctype>
#include <charconv>
#include <vector>

#include "lamptree/errors.hpp"

namespace lamptree {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ParseError("bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_word(const TreeVertex& x) {
  if (x.is_root()) return "o";
  std::string out;
  for (const auto& s : x.syllables()) {
    if (!out.empty()) out += '-';
    out += std::to_string(s.factor);
    out += ':';
    out += std::to_string(s.exponent);
  }
  return out;
}

std::string format_configuration(const Configuration& c) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, s] : c.sorted()) {
    if (!first) out += ';';
    first = false;
    out += format_word(v);
    out += '=';
    out += std::to_string(s);
  }
  out += '}';
  return out;
}

std::string format_element(const GroupElement& g) {
  return format_configuration(g.eta) + "@" + format_word(g.x);
}

std::string format_boundary_point(const BoundaryPoint& b) {
  return format_configuration(b.zeta) + "@" + format_word(b.end.prefix()) + "...";
}

TreeVertex parse_word(const FreeProduct& base, std::string_view text) {
  text = trim(text);
  if (text == "o" || text.empty()) return TreeVertex{};
  std::vector<Syllable> raw;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t colon = text.find(':', pos);
    if (colon == std::string_view::npos) throw ParseError("word '" + std::string(text) + "': missing ':'");
    std::size_t exp_begin = colon + 1;
    std::size_t exp_end = exp_begin;
    if (exp_end < text.size() && text[exp_end] == '-') ++exp_end;
    while (exp_end < text.size() && std::isdigit(static_cast<unsigned char>(text[exp_end]))) ++exp_end;
    if (colon == pos || !std::isdigit(static_cast<unsigned char>(text[pos])))
      throw ParseError("word '" + std::string(text) + "': bad factor index");
    auto factor = parse_int(text.substr(pos, colon - pos), "factor index");
    auto exponent = parse_int(text.substr(exp_begin, exp_end - exp_begin), "exponent");
    raw.push_back({static_cast<int>(factor), exponent});
    if (exp_end == text.size()) break;
    if (text[exp_end] != '-' || exp_end + 1 == text.size())
      throw ParseError("word '" + std::string(text) + "': expected '-' between syllables");
    pos = exp_end + 1;
  }
  try {
    return base.reduce(raw);
  } catch (const std::out_of_range& e) {
    throw ParseError("word '" + std::string(text) + "': " + e.what());
  }
}

Configuration parse_configuration(const Lamplighter& group, std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw ParseError("configuration '" + std::string(text) + "' must be enclosed in braces");
  text = text.substr(1, text.size() - 2);
  Configuration c = group.zero();
  while (!text.empty()) {
    std::size_t semi = text.find(';');
    std::string_view entry = text.substr(0, semi);
    std::size_t eq = entry.find('=');
    if (eq == std::string_view::npos) throw ParseError("configuration entry '" + std::string(entry) + "' lacks '='");
    TreeVertex v = parse_word(group.base(), entry.substr(0, eq));
    auto state = parse_int(trim(entry.substr(eq + 1)), "lamp state");
    c.add_at(v, static_cast<int>(state));
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  return c;
}

GroupElement parse_element(const Lamplighter& group, std::string_view text) {
  std::size_t at = text.rfind('@');
  if (at == std::string_view::npos) throw ParseError("group element '" + std::string(text) + "' lacks '@'");
  return {parse_configuration(group, text.substr(0, at)), parse_word(group.base(), text.substr(at + 1))};
}

BoundaryPoint parse_boundary_point(const Lamplighter& group, std::string_view text) {
  text = trim(text);
  std::size_t at = text.rfind('@');
  if (at == std::string_view::npos || !text.ends_with("..."))
    throw ParseError("boundary point '" + std::string(text) + "' must look like {..}@word...");
  TreeVertex p = parse_word(group.base(), text.substr(at + 1, text.size() - at - 4));
  if (p.is_root()) throw ParseError("boundary point needs an end prefix of depth >= 1");
  return {parse_configuration(group, text.substr(0, at)), EndPrefix(std::move(p))};
}

}  // namespace lamptree
