#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lamptree/errors.hpp"
#include "lamptree/io.hpp"
#include "lamptree/sampling.hpp"
#include "lamptree/text.hpp"

using namespace lamptree;

TEST_CASE("word text round trip") {
  FreeProduct G({1, 2});
  CHECK(format_word(TreeVertex{}) == "o");
  auto x = G.reduce({{1, 3}, {0, 1}, {2, -2}});
  CHECK(format_word(x) == "1:3-0:1-2:-2");
  CHECK(parse_word(G, "1:3-0:1-2:-2") == x);
  CHECK(parse_word(G, " o ") == TreeVertex{});
  // parsing reduces
  CHECK(parse_word(G, "1:2-1:-2").is_root());
  CHECK(parse_word(G, "0:3") == G.reduce({{0, 1}}));

  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    auto v = random_vertex_up_to(G, rng, 7);
    CHECK(parse_word(G, format_word(v)) == v);
  }
  for (const char* bad : {"1", "1:", ":1", "1:1-", "9:1", "1:x", "o-1:1", "1:1--0:1"})
    CHECK_THROWS_AS(parse_word(G, bad), ParseError);
}

TEST_CASE("element and boundary point text round trip") {
  Lamplighter L({3, 0}, 3);
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    auto g = random_element(L, rng, 5, 4, 5);
    CHECK(parse_element(L, format_element(g)) == g);
    auto b = random_boundary_point(L, rng, 4, 3, 3);
    CHECK(parse_boundary_point(L, format_boundary_point(b)) == b);
  }
  CHECK(format_element(L.identity()) == "{}@o");
  auto g = parse_element(L, "{o=2;0:1=1}@1:1");
  CHECK(g.eta.at(TreeVertex{}) == 2);
  CHECK(format_element(g) == "{o=2;0:1=1}@1:1");
  CHECK_THROWS_AS(parse_element(L, "{o=2}"), ParseError);
  CHECK_THROWS_AS(parse_element(L, "{o}@o"), ParseError);
  CHECK_THROWS_AS(parse_boundary_point(L, "{}@o..."), ParseError);
  CHECK_THROWS_AS(parse_boundary_point(L, "{}@0:1"), ParseError);
}

TEST_CASE("measure documents") {
  Json preset = Json::parse(R"({"preset": "basic", "q": 2, "r": 2, "theta": 0.5})");
  MeasureSpec mu = measure_from_json(preset);
  CHECK(mu.atoms().size() == 4);
  CHECK(mu.group().signature() == FreeProductSignature{3, 0});

  // Explicit form round trip.
  MeasureSpec back = measure_from_json(measure_to_json(mu));
  REQUIRE(back.atoms().size() == mu.atoms().size());
  for (std::size_t i = 0; i < mu.atoms().size(); ++i) {
    CHECK(back.atoms()[i].element == mu.atoms()[i].element);
    CHECK(back.atoms()[i].p == mu.atoms()[i].p);
  }

  Json explicit_doc = Json::parse(R"({
    "signature": {"a": 1, "b": 1}, "r": 3,
    "atoms": [
      {"config": [["o", 1], ["1:1", 2]], "x": "1:1", "p": 0.25},
      {"x": "1:-1", "p": 0.75}
    ]})");
  MeasureSpec e = measure_from_json(explicit_doc);
  CHECK(e.atoms()[0].element.eta.at(e.group().base().generators()[1]) == 2);

  Json walk = Json::parse(R"({"preset": "walk_only", "signature": {"a": 0, "b": 2}, "r": 2})");
  CHECK(measure_from_json(walk).atoms().size() == 4);

  auto field_of = [](const Json& j) {
    try {
      measure_from_json(j);
    } catch (const ConfigError& err) {
      return err.field();
    }
    return std::string("<none>");
  };
  CHECK(field_of(Json::parse(R"({"preset": "basic", "q": 2, "r": 2})")) == "measure.theta");
  CHECK(field_of(Json::parse(R"({"preset": "basic", "q": 2, "theta": 0.5})")) == "measure.r");
  CHECK(field_of(Json::parse(R"({"preset": "basic", "q": 2, "r": 2, "theta": 1.5})")) == "measure");
  CHECK(field_of(Json::parse(R"({"preset": "fancy", "q": 2, "r": 2})")) == "measure.preset");
  CHECK(field_of(Json::parse(R"({"signature": {"a": 3, "b": 0}, "r": 2,
                                 "atoms": [{"x": "0:1", "p": 0.5}]})")) == "measure.atoms");
  CHECK(field_of(Json::parse(R"({"signature": {"a": 3, "b": 0}, "r": 2,
                                 "atoms": [{"x": "7:1", "p": 1}]})")) == "measure.atoms[0].x");
  CHECK(field_of(Json::parse(R"({"signature": {"a": 3, "b": 0}, "r": -2, "atoms": []})")) == "measure.r");
}

TEST_CASE("boundary function documents") {
  FreeProduct G({3, 0});
  Json doc = Json::parse(R"({"depth": 2, "window": ["o", "1:1"],
    "entries": [{"prefix": "0:1-1:1", "lamps": [1, 0], "value": 0.5}], "default": 0.25})");
  BoundaryFunction f = boundary_function_from_json(G, doc);
  CHECK(f.depth() == 2);
  CHECK(f.value(parse_word(G, "0:1-1:1"), {1, 0}) == 0.5);
  CHECK(f.value(parse_word(G, "0:1-1:1"), {0, 0}) == 0.25);
  Json again = boundary_function_to_json(f);
  CHECK(boundary_function_to_json(boundary_function_from_json(G, again)) == again);

  Json bad = Json::parse(R"({"depth": 2, "entries": [{"prefix": "0:1", "value": 1}], "default": 0})");
  CHECK_THROWS_AS(boundary_function_from_json(G, bad), ConfigError);
}

TEST_CASE("json file errors carry positions") {
  auto path = std::filesystem::temp_directory_path() / "lamptree_bad.json";
  {
    std::ofstream out(path);
    out << "{\n  \"a\": 1,\n  \"b\": oops\n}\n";
  }
  try {
    read_json_file(path.string());
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_json_file("/nonexistent/x.json"), ConfigError);
}
