// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any
// criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lamptree/cli.hpp"
#include "lamptree/convergence.hpp"
#include "lamptree/potential.hpp"
#include "lamptree/sampling.hpp"
#include "lamptree/strip.hpp"
#include "lamptree/text.hpp"
#include "oracles.hpp"

using namespace lamptree;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// --------------------------------------------------------------------------

Verdict metric_oracle() {
  Verdict v;
  Lamplighter G({3, 0}, 2);
  oracle::Lamplighter O{{3, 0}, 2};
  const int radius = 5;
  auto ball = O.bfs({}, 2 * radius);
  std::vector<std::pair<oracle::Lamplighter::Element, GroupElement>> small;
  for (const auto& [e, d] : ball)
    if (d <= radius) small.emplace_back(e, O.to_library(G, e));
  std::size_t pairs = 0, mismatches = 0;
  for (const auto& [ge, g] : small) {
    const auto gi = O.inv(ge);
    for (const auto& [he, h] : small) {
      ++pairs;
      auto it = ball.find(O.mul(gi, he));
      if (it == ball.end() || static_cast<std::size_t>(it->second) != G.distance(g, h)) ++mismatches;
    }
  }
  v.note("|B(5)|=" + std::to_string(small.size()) + " pairs=" + std::to_string(pairs) +
         " mismatches=" + std::to_string(mismatches));
  if (mismatches) v.fail("distance differs from breadth-first search");
  return v;
}

Verdict group_law() {
  Verdict v;
  std::size_t failures = 0, checks = 0;
  struct Case {
    FreeProductSignature sig;
    int r;
  };
  const std::vector<Case> cases{{{3, 0}, 2}, {{1, 1}, 3}, {{0, 2}, 5}, {{2, 1}, 2}};
  const std::size_t per_case = 100000 / cases.size();
  for (std::size_t c = 0; c < cases.size(); ++c) {
    Lamplighter G(cases[c].sig, cases[c].r);
    Rng rng(derive_seed(2, c));
    for (std::size_t t = 0; t < per_case; ++t) {
      auto g = random_element(G, rng, 6, 4, 4);
      auto h = random_element(G, rng, 6, 4, 4);
      auto k = random_element(G, rng, 6, 4, 4);
      const auto gi = G.inv(g);
      failures += G.mul(G.mul(g, h), k) != G.mul(g, G.mul(h, k));
      failures += G.mul(g, G.identity()) != g;
      failures += G.mul(G.identity(), g) != g;
      failures += G.mul(g, gi) != G.identity();
      failures += G.mul(gi, g) != G.identity();
      ++checks;
    }
  }
  v.note(std::to_string(checks) + " random triples, " + std::to_string(failures) + " failures");
  if (failures) v.fail("group law violated");
  return v;
}

Verdict basic_walk_law() {
  Verdict v;
  struct Case {
    FreeProductSignature sig;
    int r;
    double theta;
  };
  for (auto c : {Case{{3, 0}, 2, 0.5}, Case{{1, 1}, 3, 0.3}, Case{{0, 2}, 5, 0.7}, Case{{4, 0}, 4, 0.25}}) {
    auto mu = basic_walk(c.sig, c.r, c.theta);
    const int q = c.sig.q();
    const double move = c.theta / (q + 1);
    const double flip = (1 - c.theta) / (c.r - 1);
    std::size_t moves = 0, flips = 0;
    for (const auto& a : mu.atoms()) {
      const auto& e = a.element;
      if (e.eta.empty() && e.x.length() == 1) {
        ++moves;
        if (a.p != move) v.fail("move mass differs from theta/(q+1)");
      } else if (e.x.is_root() && e.eta.lamps().size() == 1 && e.eta.at(TreeVertex{}) != 0) {
        ++flips;
        if (a.p != flip) v.fail("switch mass differs from (1-theta)/(r-1)");
      } else {
        v.fail("unexpected atom " + format_element(e));
      }
    }
    if (moves != static_cast<std::size_t>(q + 1) || flips != static_cast<std::size_t>(c.r - 1))
      v.fail("wrong number of atoms");

    IncrementSampler sampler(mu);
    Rng rng(derive_seed(3, static_cast<std::uint64_t>(c.r)));
    const std::size_t N = 100000;
    std::vector<std::size_t> count(mu.atoms().size(), 0);
    for (std::size_t i = 0; i < N; ++i) ++count[sampler.sample(rng)];
    double worst = 0.0;
    for (std::size_t k = 0; k < count.size(); ++k) {
      const double p = mu.atoms()[k].p;
      const double se = std::sqrt(p * (1 - p) / N);
      worst = std::max(worst, std::abs(static_cast<double>(count[k]) / N - p) / se);
    }
    if (worst > 4) v.fail("sampling frequency beyond 4 SE");
    v.note("q=" + std::to_string(q) + " r=" + std::to_string(c.r) + " worst z=" + fmt("%.2f", worst));
  }
  return v;
}

Verdict escape() {
  Verdict v;
  auto mu = basic_walk({3, 0}, 2, 0.5);
  auto e = escape_rates(mu, 10000, 200, derive_seed(4, 0), workers());
  const double oracle_m = 0.5 * (2 - 1) / (2 + 1);
  v.note("m_hat=" + fmt("%.5f", e.m_hat) + " se=" + fmt("%.5f", e.m_se) + " ell_hat=" + fmt("%.5f", e.ell_hat) +
         " target=" + fmt("%.5f", oracle_m));
  if (std::abs(e.m_hat - oracle_m) > 0.02) v.fail("m_hat off by more than 0.02");
  if (!(e.m_hat - 2.3263478740408408 * e.m_se > 0)) v.fail("m_hat not positive at 99% confidence");
  if (!(e.ell_hat >= e.m_hat - 3 * e.m_se)) v.fail("ell_hat below m_hat - 3 SE");
  return v;
}

Verdict convergence() {
  Verdict v;
  auto mu = basic_walk({3, 0}, 2, 0.5);
  const auto& G = mu.group();
  auto fraction = [&](std::size_t horizon) {
    auto recs = sample_limits(mu, G.identity(), 1000, horizon, derive_seed(5, 0), 5, RunOptions{0.25, workers()});
    std::size_t ok = 0;
    for (const auto& r : recs) ok += r.prefix_stable(5) && r.lamps_stable(3);
    return static_cast<double>(ok) / static_cast<double>(recs.size());
  };
  const double at_2000 = fraction(2000);
  const double at_4000 = fraction(4000);
  v.note("stable fraction " + fmt("%.3f", at_2000) + " at 2000, " + fmt("%.3f", at_4000) + " at 4000");
  if (at_2000 < 0.95) v.fail("fewer than 95% stabilized");
  if (at_4000 < at_2000) v.fail("fraction decreased when the horizon doubled");
  return v;
}

Verdict symmetry() {
  Verdict v;
  auto mu = basic_walk({3, 0}, 2, 0.5);
  auto events = end_cylinders(mu.group().base(), 1);
  const std::size_t N = 10000;
  auto est = estimate_harmonic_measure(mu, events, N, 2000, derive_seed(6, 0), RunOptions{0.25, workers()});
  std::size_t hits = 0;
  std::string ps;
  for (const auto& e : est.events) {
    if (std::abs(e.p_hat - 1.0 / 3) > 3 * e.std_err) v.fail("cylinder estimate beyond 3 SE of 1/(q+1)");
    hits += e.hits;
    ps += fmt(" %.4f", e.p_hat);
  }
  const std::size_t ind = est.events[0].indeterminate;
  double sum = 0.0;
  for (const auto& e : est.events) sum += e.p_hat;
  v.note("p_hat" + ps + " indeterminate=" + std::to_string(ind));
  if (hits + ind != N) v.fail("hits + indeterminate != N");
  if (std::abs(sum - (1.0 - static_cast<double>(ind) / N)) > 1e-12) v.fail("partition sum differs");
  return v;
}

Verdict continuity() {
  Verdict v;
  auto mu = basic_walk({3, 0}, 2, 0.5);
  const std::size_t N = 10000;
  auto recs = sample_limits(mu, mu.group().identity(), N, 2000, derive_seed(7, 0), 5, RunOptions{0.25, workers()});
  double previous = 2.0;
  std::string maxes;
  for (std::size_t k = 1; k <= 5; ++k) {
    std::map<TreeVertex, std::size_t> count;
    for (const auto& r : recs)
      if (r.prefix_stable(k)) ++count[prefix(r.end_prefix->prefix(), k)];
    std::size_t top = 0;
    for (const auto& [p, c] : count) top = std::max(top, c);
    const double m = static_cast<double>(top) / N;
    maxes += fmt(" %.4f", m);
    if (!(m < previous)) v.fail("max cylinder mass did not decrease at depth " + std::to_string(k));
    previous = m;
  }
  v.note("max mass by depth" + maxes);
  return v;
}

Verdict strips() {
  Verdict v;
  Lamplighter G({3, 0}, 2);
  Rng rng(derive_seed(8, 0));
  std::size_t failed = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + i % 20;
    auto inst = random_strip_instance(G, rng, n + 6, 3, 3);
    failed += !verify_strip_equivariance(G, inst.g, inst.beta, inst.beta_check, n);
  }
  std::size_t largest = 0;
  bool bound_ok = true;
  for (std::size_t n = 0; n <= 50; ++n) {
    for (int t = 0; t < 5; ++t) {
      auto inst = random_strip_instance(G, rng, n + 3, 3, 0);
      auto pts = strip_points_in_ball(G, {inst.beta, inst.beta_check, n});
      if (pts.size() > 2 * n + 1) bound_ok = false;
      std::size_t in_group_ball = 0;
      for (const auto& p : pts) in_group_ball += G.distance(G.identity(), p) <= n;
      if (in_group_ball > 2 * n + 1) bound_ok = false;
      largest = std::max(largest, pts.size());
    }
  }
  v.note("equivariance failures " + std::to_string(failed) + "/1000; largest count " + std::to_string(largest) +
         " (bound 101 at n=50)");
  if (failed) v.fail("equivariance failed");
  if (!bound_ok) v.fail("strip count above 2n+1");
  return v;
}

Verdict green() {
  Verdict v;
  FreeProduct B({3, 0});
  auto srw = simple_random_walk(B);
  const std::vector<std::size_t> distances{0, 1, 2, 3, 4};
  auto rows = green_decay_profile(srw, distances, 100000, 10000, derive_seed(9, 0), workers());
  double previous = 2.0;
  std::string fs;
  for (const auto& row : rows) {
    const auto& e = row.estimate;
    const double target = std::pow(2.0, -static_cast<double>(row.distance));
    fs += fmt(" %.4f", e.F_hat);
    if (std::abs(e.F_hat - target) > 3 * e.F_se + 1e-15)
      v.fail("F_hat beyond 3 SE of q^-d at d=" + std::to_string(row.distance));
    if (e.F_hat > previous) v.fail("decay profile increased at d=" + std::to_string(row.distance));
    previous = e.F_hat;
    if (row.distance == 0) continue;
    auto gyy = estimate_green(srw, e.y, e.y, 10000, 10000, derive_seed(derive_seed(9, 1), row.distance), workers());
    const double ratio = e.G_hat / gyy.G_hat;
    const double ratio_se = ratio * std::hypot(e.G_se / e.G_hat, gyy.G_se / gyy.G_hat);
    if (std::abs(ratio - e.F_hat) > 3 * std::hypot(ratio_se, e.F_se))
      v.fail("G ratio inconsistent with F_hat at d=" + std::to_string(row.distance));
    fs += fmt("(ratio %.4f)", ratio);
  }
  v.note("F_hat by d" + fs);
  return v;
}

Verdict dirichlet() {
  Verdict v;
  const int q = 2;
  const double theta = 0.5;
  auto mu = basic_walk({3, 0}, 2, theta);
  const auto& G = mu.group();
  const auto& B = G.base();
  const TreeVertex first = B.generators()[0];
  auto f = BoundaryFunction::indicator(EndPrefix(first), {{TreeVertex{}, 1}});
  BoundaryPoint beta{Configuration::delta(2, TreeVertex{}), EndPrefix(B.ray_vertex(12))};

  DirichletOptions opt;
  opt.horizon = 2000;
  opt.workers = workers();
  std::vector<std::size_t> depths;
  for (std::size_t k = 1; k <= 10; ++k) depths.push_back(k);
  auto rows = dirichlet_boundary_convergence(mu, f, beta, {depths}, 4000, derive_seed(10, 0), opt);

  const double h1 = oracle::lamp_and_cylinder_from_root(q, theta, 1);
  auto target = [&](std::size_t k) {
    const double back = std::pow(static_cast<double>(q), -static_cast<double>(k));
    return (1 - back) + back * h1;
  };
  const auto& last = rows.back().value;
  v.note("h(g_10)=" + fmt("%.5f", last.h_hat) + " se=" + fmt("%.5f", last.std_err) + " target=" +
         fmt("%.5f", target(10)));
  if (std::abs(last.h_hat - target(10)) > 3 * last.std_err + 1e-12) v.fail("h(g_10) beyond 3 SE of the target");

  // Trend: least-squares slope over k and a significant rise first to last.
  double sk = 0, sh = 0, skk = 0, skh = 0;
  for (const auto& r : rows) {
    const double k = static_cast<double>(r.depth);
    sk += k;
    sh += r.value.h_hat;
    skk += k * k;
    skh += k * r.value.h_hat;
  }
  const double m = static_cast<double>(rows.size());
  const double slope = (m * skh - sk * sh) / (m * skk - sk * sk);
  const auto& head = rows.front().value;
  const double rise = last.h_hat - head.h_hat;
  v.note("slope=" + fmt("%.4f", slope) + " rise=" + fmt("%.4f", rise));
  if (!(slope > 0)) v.fail("h_hat sequence has no increasing trend");
  if (!(rise > 3 * std::hypot(last.std_err, head.std_err))) v.fail("rise not significant");

  Rng rng(derive_seed(10, 1));
  DirichletOptions ropt = opt;
  ropt.horizon = 1000;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto g = random_element(G, rng, 3, 2, 2);
    auto res = mean_value_residual(mu, f, g, 2000, derive_seed(derive_seed(10, 2), i), ropt);
    worst = std::max(worst, res.residual / res.combined_std_err);
    if (res.residual > 3 * res.combined_std_err) v.fail("mean-value residual beyond 3 SE at " + format_element(g));
  }
  v.note("worst residual/SE=" + fmt("%.2f", worst));
  return v;
}

Verdict reproducibility() {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lamptree_acceptance";
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  write("cyl.json", R"({"depth": 1, "window": ["o"], "entries": [{"prefix": "0:1", "lamps": [1], "value": 1}],
                       "default": 0})");
  const std::string common = R"("signature": {"a": 3, "b": 0}, "r": 2, "master_seed": 77)";
  const std::string basic = R"("measure": {"preset": "basic", "theta": 0.5})";
  const std::vector<std::pair<std::string, std::string>> runs{
      {"simulate", "{" + common + "," + basic + R"(, "N": 20, "horizon": 500})"},
      {"escape", "{" + common + "," + basic + R"(, "N": 20, "n": [100, 400]})"},
      {"measure", "{" + common + "," + basic + R"(, "N": 50, "horizon": 400, "partition_depth": 2})"},
      {"green", "{" + common + R"(, "walk": "srw", "N": 200, "horizon": 300, "distances": [0, 1, 2],
                  "pairs": [["o", "0:1-1:1"]], "ratio": true})"},
      {"dirichlet", "{" + common + "," + basic + R"(, "function": "cyl.json", "N": 40, "horizon": 300,
                      "points": ["{}@o", "{o=1}@0:1"], "sequence": {"boundary_point": "{o=1}@0:1-1:1-0:1...",
                      "depths": [1, 2, 3]}, "residual_points": ["{}@o"]})"},
      {"strip", "{" + common + R"(, "radius": 6, "max_radius": 6, "instances": 10})"},
      {"metric-check", "{" + common + R"(, "radius": 2})"},
  };
  for (const auto& [cmd, config] : runs) {
    const std::string path = write(cmd + ".json", config);
    std::vector<std::string> outputs;
    for (const char* w : {"1", "1", "3"}) {
      std::ostringstream out, err;
      const int code = cli::run({cmd, "--config", path, "--workers", w}, out, err);
      if (code != 0) v.fail(cmd + " exited with " + std::to_string(code) + ": " + err.str());
      outputs.push_back(out.str());
    }
    if (outputs[0] != outputs[1]) v.fail(cmd + " differs between identical runs");
    if (outputs[0] != outputs[2]) v.fail(cmd + " differs between worker counts");
    if (outputs[0].empty()) v.fail(cmd + " wrote nothing");
  }
  fs::remove_all(dir);
  v.note(std::to_string(runs.size()) + " subcommands, 3 runs each (workers 1, 1, 3)");
  return v;
}

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0: none
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "metric oracle equivalence", 60, metric_oracle},
      {2, "group law", 10, group_law},
      {3, "basic walk law", 0, basic_walk_law},
      {4, "escape rates", 300, escape},
      {5, "convergence", 0, convergence},
      {6, "harmonic measure symmetry", 0, symmetry},
      {7, "continuity proxy", 0, continuity},
      {8, "strip hypotheses", 0, strips},
      {9, "Green kernel and hitting probabilities", 0, green},
      {10, "Dirichlet problem", 0, dirichlet},
      {11, "reproducibility", 0, reproducibility},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0 && secs > c.time_limit_s) v.fail("took longer than " + fmt("%.0f s", c.time_limit_s));
    failures += !v.pass;
    std::printf("criterion %d (%s): %s [%.1f s] %s\n", c.id, c.name.c_str(), v.pass ? "PASS" : "FAIL", secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
