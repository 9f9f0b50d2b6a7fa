#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <json.hpp>

#include "lamptree/measure.hpp"
#include "lamptree/potential.hpp"

namespace lamptree {

using Json = nlohmann::ordered_json;

/// Invalid configuration or input file. `field` is the dotted path of the
/// offending entry (empty when the problem is the document as a whole).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : "field '" + field + "': " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Parses a file, reporting line and column of syntax errors.
Json read_json_file(const std::string& path);

inline std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// Fetches a required member; throws ConfigError naming `path.key`.
const Json& require(const Json& obj, const std::string& path, const std::string& key);

/// Typed read with a ConfigError naming `field` on mismatch. Unsigned
/// targets reject negative numbers instead of wrapping them.
template <class T>
T get_value(const Json& j, const std::string& field) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) throw ConfigError(field, "expected true or false");
  } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
    if (!j.is_number_unsigned()) throw ConfigError(field, "expected a non-negative integer");
  } else if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!j.is_number()) throw ConfigError(field, "expected a number");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!j.is_string()) throw ConfigError(field, "expected a string");
  }
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(field, std::string("wrong type: ") + e.what());
  }
}

template <class T>
T get_field(const Json& obj, const std::string& path, const std::string& key) {
  return get_value<T>(require(obj, path, key), join_path(path, key));
}

template <class T>
T get_field_or(const Json& obj, const std::string& path, const std::string& key, T fallback) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  return it == obj.end() ? fallback : get_value<T>(*it, join_path(path, key));
}

FreeProductSignature signature_from_json(const Json& j, const std::string& path);

/// Measure document. Either explicit
///   {signature: {a, b}, r, atoms: [{config: [[vertex, state]...], x, p}], label}
/// or a preset
///   {preset: "basic", q, r, theta}    {preset: "walk_only", q, r}
/// where a preset may give `signature` instead of (or besides) q. With only
/// q the base is the free product of q + 1 copies of Z2.
MeasureSpec measure_from_json(const Json& j, const std::string& path = "measure");
Json measure_to_json(const MeasureSpec& mu);

/// {depth, window: [vertex...], entries: [{prefix, lamps, value}...], default}
BoundaryFunction boundary_function_from_json(const FreeProduct& base, const Json& j,
                                             const std::string& path = "function");
Json boundary_function_to_json(const BoundaryFunction& f);

}  // namespace lamptree
