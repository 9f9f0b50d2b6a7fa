#include <doctest.h>

#include "lamptree/errors.hpp"
#include "lamptree/sampling.hpp"
#include "lamptree/wreath.hpp"
#include "oracles.hpp"

using namespace lamptree;

namespace {

TreeVertex gen(const Lamplighter& G, int i) { return G.base().generators()[i]; }

GroupElement switch_at_root(const Lamplighter& G, int state = 1) {
  return {Configuration::delta(G.r(), TreeVertex{}, state), TreeVertex{}};
}

}  // namespace

TEST_CASE("configuration arithmetic") {
  Lamplighter G2({3, 0}, 2), G3({3, 0}, 3);
  auto a = Configuration::delta(2, gen(G2, 0));
  CHECK(G2.config_add(a, G2.zero()) == a);
  CHECK(G2.config_add(Configuration::delta(2, {}), Configuration::delta(2, {})).empty());
  CHECK(G3.config_add(Configuration::delta(3, {}), Configuration::delta(3, {})) == Configuration::delta(3, {}, 2));
  Configuration c(3);
  c.add_at(gen(G3, 1), 2);
  c.add_at(gen(G3, 1), 1);
  CHECK(c.empty());
  c.set(gen(G3, 2), 5);
  CHECK(c.at(gen(G3, 2)) == 2);
  CHECK(c.negated().at(gen(G3, 2)) == 1);
  CHECK_THROWS_AS(Configuration(1), std::invalid_argument);
  CHECK_THROWS_AS(G2.config_add(Configuration(2), Configuration(3)), ParameterMismatch);
}

TEST_CASE("configuration hash ignores insertion order") {
  Lamplighter G({3, 0}, 3);
  Configuration x(3), y(3);
  x.set(gen(G, 0), 1);
  x.set(gen(G, 1), 2);
  y.set(gen(G, 1), 2);
  y.set(gen(G, 0), 1);
  CHECK(x == y);
  CHECK(x.hash() == y.hash());
  CHECK(x.support() == std::vector<TreeVertex>{gen(G, 0), gen(G, 1)});
  auto r = x.restricted_to_ball(0);
  CHECK(r.empty());
}

TEST_CASE("translation") {
  Lamplighter G({1, 1}, 2);
  Rng rng(1);
  auto x = random_vertex(G.base(), rng, 3);
  auto eta = random_configuration(G, rng, 3, 5);
  CHECK(G.translate(TreeVertex{}, eta) == eta);
  CHECK(G.translate(x, Configuration::delta(2, {})) == Configuration::delta(2, x));
  CHECK(G.translate(x, G.translate(G.base().inverse(x), eta)) == eta);
}

TEST_CASE("multiplication examples") {
  Lamplighter G({3, 0}, 2);
  auto g = G.identity();
  g.x = gen(G, 1);
  g.eta.set(gen(G, 2), 1);
  CHECK(G.mul(g, G.identity()) == g);
  CHECK(G.mul(G.identity(), g) == g);
  CHECK(G.mul(switch_at_root(G), switch_at_root(G)) == G.identity());

  GroupElement moved{G.zero(), gen(G, 0)};
  auto lit = G.mul(moved, switch_at_root(G));
  CHECK(lit.x == gen(G, 0));
  CHECK(lit.eta == Configuration::delta(2, gen(G, 0)));
  // Same element reached by one lamplighter-graph step from (zero, s).
  bool adjacent = false;
  for (const auto& n : G.graph_neighbors(moved)) adjacent |= n == lit;
  CHECK(adjacent);

  CHECK(G.inv(G.identity()) == G.identity());
  CHECK(G.inv(switch_at_root(G)) == switch_at_root(G));
}

TEST_CASE("group law on random elements agrees with the letter model") {
  for (int r : {2, 3, 5}) {
    for (FreeProductSignature sig : {FreeProductSignature{3, 0}, FreeProductSignature{1, 1}}) {
      Lamplighter G(sig, r);
      oracle::Lamplighter O{{sig.a, sig.b}, r};
      Rng rng(derive_seed(17, static_cast<std::uint64_t>(r * 100 + sig.a)));
      for (int t = 0; t < 300; ++t) {
        auto g = random_element(G, rng, 5, 4, 4);
        auto h = random_element(G, rng, 5, 4, 4);
        auto k = random_element(G, rng, 5, 4, 4);
        CHECK(G.mul(G.mul(g, h), k) == G.mul(g, G.mul(h, k)));
        CHECK(G.mul(g, G.inv(g)) == G.identity());
        CHECK(G.mul(G.inv(g), g) == G.identity());
        CHECK(O.from_library(G.mul(g, h)) == O.mul(O.from_library(g), O.from_library(h)));
        CHECK(O.from_library(G.inv(g)) == O.inv(O.from_library(g)));
      }
    }
  }
}

TEST_CASE("distance examples") {
  Lamplighter G({3, 0}, 2);
  auto id = G.identity();
  CHECK(G.distance(id, id) == 0);
  CHECK(G.distance(id, switch_at_root(G)) == 1);
  GroupElement far{Configuration::delta(2, gen(G, 0)), TreeVertex{}};
  CHECK(G.distance(id, far) == 3);
}

TEST_CASE("distance equals breadth-first search distance") {
  struct Case {
    FreeProductSignature sig;
    int r;
    int radius;
  };
  for (auto c : {Case{{3, 0}, 2, 4}, Case{{3, 0}, 3, 3}, Case{{1, 1}, 2, 4}, Case{{0, 2}, 2, 3}}) {
    Lamplighter G(c.sig, c.r);
    oracle::Lamplighter O{{c.sig.a, c.sig.b}, c.r};
    auto oracle_ball = O.bfs({}, 2 * c.radius);
    // The library BFS over its own adjacency must find the same ball.
    auto lib_ball = G.ball(2 * c.radius);
    CHECK(lib_ball.size() == oracle_ball.size());

    std::vector<std::pair<oracle::Lamplighter::Element, GroupElement>> small;
    for (const auto& [e, d] : oracle_ball) {
      GroupElement g = O.to_library(G, e);
      REQUIRE(lib_ball.count(g) == 1);
      CHECK(lib_ball.at(g) == static_cast<std::size_t>(d));
      CHECK(G.distance(G.identity(), g) == static_cast<std::size_t>(d));
      if (d <= c.radius) small.emplace_back(e, std::move(g));
    }
    std::size_t mismatches = 0;
    for (const auto& [ge, g] : small)
      for (const auto& [he, h] : small) {
        auto it = oracle_ball.find(O.mul(O.inv(ge), he));
        if (it == oracle_ball.end() || static_cast<std::size_t>(it->second) != G.distance(g, h)) ++mismatches;
      }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("distance from non-identity sources") {
  Lamplighter G({1, 1}, 3);
  oracle::Lamplighter O{{1, 1}, 3};
  Rng rng(23);
  for (int t = 0; t < 4; ++t) {
    auto g = random_element(G, rng, 3, 2, 2);
    auto ball = O.bfs(O.from_library(g), 4);
    for (const auto& [e, d] : ball) CHECK(G.distance(g, O.to_library(G, e)) == static_cast<std::size_t>(d));
  }
}

TEST_CASE("metric properties on random elements") {
  Lamplighter G({3, 0}, 3);
  Rng rng(29);
  for (int t = 0; t < 300; ++t) {
    auto g = random_element(G, rng, 6, 5, 5);
    auto h = random_element(G, rng, 6, 5, 5);
    auto k = random_element(G, rng, 6, 5, 5);
    CHECK(G.distance(g, h) == G.distance(h, g));
    CHECK(G.distance(g, k) <= G.distance(g, h) + G.distance(h, k));
    CHECK(G.distance(G.mul(k, g), G.mul(k, h)) == G.distance(g, h));
    CHECK(G.distance(g, h) >= tree_distance(g.x, h.x));
  }
}

TEST_CASE("boundary action") {
  Lamplighter G({3, 0}, 2);
  Rng rng(31);
  auto beta = random_boundary_point(G, rng, 6, 3, 4);
  CHECK(G.act(G.identity(), beta) == beta);

  auto switched = G.act(switch_at_root(G), beta);
  CHECK(switched.end == beta.end);
  CHECK(switched.zeta == G.config_add(Configuration::delta(2, {}), beta.zeta));

  for (int t = 0; t < 300; ++t) {
    auto g = random_element(G, rng, 3, 3, 3);
    auto h = random_element(G, rng, 3, 3, 3);
    auto b = random_boundary_point(G, rng, 8, 3, 3);
    CHECK(G.act(G.mul(g, h), b) == G.act(g, G.act(h, b)));
  }

  // x = prefix^{-1} cancels the whole prefix: the image end is unknown.
  GroupElement back{G.zero(), G.base().inverse(beta.end.prefix())};
  CHECK_THROWS_AS(G.act(back, beta), UnresolvedAtDepth);
}

TEST_CASE("generators") {
  Lamplighter G({3, 0}, 3);
  auto gens = G.generators();
  CHECK(gens.size() == 3 + 2);
  for (const auto& s : gens) CHECK(G.distance(G.identity(), s) == 1);
  CHECK(G.graph_neighbors(G.identity()).size() == 5);
}
