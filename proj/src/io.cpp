#include "lamptree/io.hpp"

#include <fstream>
#include <sstream>

#include "lamptree/errors.hpp"
#include "lamptree/text.hpp"

namespace lamptree {

namespace {

std::string join(const std::string& path, const std::string& key) { return join_path(path, key); }

template <class T>
T get_as(const Json& j, const std::string& field) {
  return get_value<T>(j, field);
}

TreeVertex word_at(const FreeProduct& base, const Json& j, const std::string& field) {
  try {
    return parse_word(base, get_as<std::string>(j, field));
  } catch (const ParseError& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("", path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": JSON syntax error");
  }
}

const Json& require(const Json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(path, key), "missing field");
  return *it;
}

FreeProductSignature signature_from_json(const Json& j, const std::string& path) {
  FreeProductSignature sig{get_as<int>(require(j, path, "a"), join(path, "a")),
                           get_as<int>(require(j, path, "b"), join(path, "b"))};
  try {
    sig.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return sig;
}

MeasureSpec measure_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const int r = get_as<int>(require(j, path, "r"), join(path, "r"));
  if (r < 2) throw ConfigError(join(path, "r"), "must be >= 2");

  if (j.contains("preset")) {
    const std::string preset = get_as<std::string>(j.at("preset"), join(path, "preset"));
    std::optional<FreeProductSignature> sig;
    if (j.contains("signature")) sig = signature_from_json(j.at("signature"), join(path, "signature"));
    if (j.contains("q")) {
      int q = get_as<int>(j.at("q"), join(path, "q"));
      if (q < 2) throw ConfigError(join(path, "q"), "must be >= 2");
      if (sig && sig->q() != q) throw ConfigError(join(path, "q"), "disagrees with signature");
      if (!sig) sig = FreeProductSignature{q + 1, 0};
    }
    if (!sig) throw ConfigError(join(path, "q"), "missing field (or give signature)");
    try {
      if (preset == "basic") {
        double theta = get_as<double>(require(j, path, "theta"), join(path, "theta"));
        return basic_walk(*sig, r, theta);
      }
      if (preset == "walk_only") return walk_only(*sig, r);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path, e.what());
    }
    throw ConfigError(join(path, "preset"), "unknown preset '" + preset + "'");
  }

  const auto sig = signature_from_json(require(j, path, "signature"), join(path, "signature"));
  Lamplighter group(sig, r);
  const Json& atoms_json = require(j, path, "atoms");
  if (!atoms_json.is_array()) throw ConfigError(join(path, "atoms"), "expected an array");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < atoms_json.size(); ++i) {
    const std::string apath = join(path, "atoms[" + std::to_string(i) + "]");
    const Json& a = atoms_json[i];
    Configuration eta = group.zero();
    if (a.contains("config")) {
      const Json& cfg = a.at("config");
      if (!cfg.is_array()) throw ConfigError(join(apath, "config"), "expected [[vertex, state], ...]");
      for (std::size_t k = 0; k < cfg.size(); ++k) {
        const std::string epath = join(apath, "config[" + std::to_string(k) + "]");
        if (!cfg[k].is_array() || cfg[k].size() != 2) throw ConfigError(epath, "expected [vertex, state]");
        eta.add_at(word_at(group.base(), cfg[k][0], epath), get_as<int>(cfg[k][1], epath));
      }
    }
    TreeVertex x = word_at(group.base(), require(a, apath, "x"), join(apath, "x"));
    double p = get_as<double>(require(a, apath, "p"), join(apath, "p"));
    atoms.push_back({{std::move(eta), std::move(x)}, p});
  }
  std::string label = j.contains("label") ? get_as<std::string>(j.at("label"), join(path, "label")) : "";
  try {
    return MeasureSpec(std::move(group), std::move(atoms), std::move(label));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join(path, "atoms"), e.what());
  }
}

Json measure_to_json(const MeasureSpec& mu) {
  Json atoms = Json::array();
  for (const auto& a : mu.atoms()) {
    Json cfg = Json::array();
    for (const auto& [v, s] : a.element.eta.sorted()) cfg.push_back({format_word(v), s});
    atoms.push_back({{"config", cfg}, {"x", format_word(a.element.x)}, {"p", a.p}});
  }
  const auto& sig = mu.group().signature();
  return {{"signature", {{"a", sig.a}, {"b", sig.b}}},
          {"r", mu.group().r()},
          {"atoms", atoms},
          {"label", mu.label()}};
}

BoundaryFunction boundary_function_from_json(const FreeProduct& base, const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const int depth = get_as<int>(require(j, path, "depth"), join(path, "depth"));
  if (depth < 0) throw ConfigError(join(path, "depth"), "must be >= 0");
  std::vector<TreeVertex> window;
  if (j.contains("window")) {
    const Json& w = j.at("window");
    if (!w.is_array()) throw ConfigError(join(path, "window"), "expected an array of vertices");
    for (std::size_t i = 0; i < w.size(); ++i)
      window.push_back(word_at(base, w[i], join(path, "window[" + std::to_string(i) + "]")));
  }
  const double dflt = get_as<double>(require(j, path, "default"), join(path, "default"));
  std::optional<BoundaryFunction> f;
  try {
    f.emplace(static_cast<std::size_t>(depth), std::move(window), dflt);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join(path, "window"), e.what());
  }
  if (j.contains("entries")) {
    const Json& entries = j.at("entries");
    if (!entries.is_array()) throw ConfigError(join(path, "entries"), "expected an array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string epath = join(path, "entries[" + std::to_string(i) + "]");
      TreeVertex p = word_at(base, require(entries[i], epath, "prefix"), join(epath, "prefix"));
      std::vector<int> lamps;
      if (entries[i].contains("lamps")) lamps = get_as<std::vector<int>>(entries[i].at("lamps"), join(epath, "lamps"));
      double value = get_as<double>(require(entries[i], epath, "value"), join(epath, "value"));
      try {
        f->set(std::move(p), std::move(lamps), value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(epath, e.what());
      }
    }
  }
  return std::move(*f);
}

Json boundary_function_to_json(const BoundaryFunction& f) {
  Json window = Json::array();
  for (const auto& v : f.window()) window.push_back(format_word(v));
  Json entries = Json::array();
  for (const auto& [key, value] : f.entries())
    entries.push_back({{"prefix", format_word(key.first)}, {"lamps", key.second}, {"value", value}});
  return {{"depth", f.depth()}, {"window", window}, {"entries", entries}, {"default", f.default_value()}};
}

}  // namespace lamptree
