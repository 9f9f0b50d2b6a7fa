#include "lamptree/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <variant>

#include "lamptree/convergence.hpp"
#include "lamptree/errors.hpp"
#include "lamptree/io.hpp"
#include "lamptree/parallel.hpp"
#include "lamptree/potential.hpp"
#include "lamptree/sampling.hpp"
#include "lamptree/strip.hpp"
#include "lamptree/text.hpp"

namespace lamptree::cli {

namespace {

using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;
using Row = std::vector<Cell>;

struct Column {
  std::string name;
  std::string description;
};

/// Everything a subcommand needs; the measure is loaded lazily because
/// metric-check and strip do not use one.
struct Context {
  Json config;
  std::filesystem::path config_dir;
  Lamplighter group;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  Json echo;

  MeasureSpec measure();
};

struct Outcome {
  std::vector<Row> rows;
  std::vector<std::string> violations;
  std::string summary;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<std::string> fields;
  std::vector<Column> columns;
  std::function<Outcome(Context&)> run;
};

const std::vector<std::string> kCommonFields = {"signature", "r", "measure", "master_seed", "format", "output"};

std::filesystem::path resolve(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::path p(name);
  return p.is_absolute() ? p : dir / p;
}

MeasureSpec Context::measure() {
  const Json& m = require(config, "", "measure");
  Json doc;
  std::string path = "measure";
  if (m.is_string()) {
    doc = read_json_file(resolve(config_dir, m.get<std::string>()).string());
  } else if (m.is_object()) {
    doc = m;
  } else {
    throw ConfigError("measure", "expected an object or a file name");
  }
  if (!doc.is_object()) throw ConfigError("measure", "measure document must be an object");
  if (!doc.contains("r")) doc["r"] = group.r();
  if (!doc.contains("signature"))
    doc["signature"] = {{"a", group.signature().a}, {"b", group.signature().b}};
  MeasureSpec mu = measure_from_json(doc, path);
  if (mu.group().signature() != group.signature() || mu.group().r() != group.r())
    throw ConfigError("measure", "signature or r disagrees with the top-level config");
  echo["measure"] = measure_to_json(mu);
  return mu;
}

std::size_t size_field(const Json& cfg, const std::string& key) { return get_field<std::size_t>(cfg, "", key); }

std::size_t size_field_or(const Json& cfg, const std::string& key, std::size_t fallback) {
  return get_field_or<std::size_t>(cfg, "", key, fallback);
}

double fraction_field(const Json& cfg) {
  double f = get_field_or<double>(cfg, "", "final_fraction", kDefaultFinalFraction);
  if (!(f > 0.0 && f < 1.0)) throw ConfigError("final_fraction", "must lie in (0, 1)");
  return f;
}

/// Accepts `horizon` or its alias `n`.
std::size_t horizon_field(const Json& cfg) {
  if (cfg.contains("horizon")) return size_field(cfg, "horizon");
  if (cfg.contains("n")) return size_field(cfg, "n");
  throw ConfigError("horizon", "missing field");
}

template <class T, class Parse>
T parse_field(const Json& j, const std::string& field, Parse&& parse) {
  try {
    return parse(get_value<std::string>(j, field));
  } catch (const ParseError& e) {
    throw ConfigError(field, e.what());
  }
}

GroupElement element_field(const Context& ctx, const Json& j, const std::string& field) {
  return parse_field<GroupElement>(j, field, [&](const std::string& s) { return parse_element(ctx.group, s); });
}

TreeVertex word_field(const Context& ctx, const Json& j, const std::string& field) {
  return parse_field<TreeVertex>(j, field, [&](const std::string& s) { return parse_word(ctx.group.base(), s); });
}

BoundaryPoint boundary_field(const Context& ctx, const Json& j, const std::string& field) {
  try {
    return parse_field<BoundaryPoint>(j, field,
                                      [&](const std::string& s) { return parse_boundary_point(ctx.group, s); });
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

const Json& array_field(const Json& cfg, const std::string& path, const std::string& key) {
  const Json& a = require(cfg, path, key);
  if (!a.is_array()) throw ConfigError(join_path(path, key), "expected an array");
  return a;
}

std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::int64_t signed_cell(long long v) { return static_cast<std::int64_t>(v); }

// ---------------------------------------------------------------- simulate

Outcome cmd_simulate(Context& ctx) {
  const MeasureSpec mu = ctx.measure();
  const std::size_t N = size_field(ctx.config, "N");
  const std::size_t horizon = horizon_field(ctx.config);
  const std::size_t max_depth = size_field_or(ctx.config, "max_depth", 5);
  if (max_depth == 0) throw ConfigError("max_depth", "must be >= 1");
  const double fraction = fraction_field(ctx.config);
  const GroupElement start =
      ctx.config.contains("start") ? element_field(ctx, ctx.config["start"], "start") : ctx.group.identity();

  std::size_t max_step = 0;
  for (const auto& a : mu.atoms()) max_step = std::max(max_step, ctx.group.distance(ctx.group.identity(), a.element));

  struct Result {
    std::uint64_t seed = 0;
    std::size_t distance = 0;
    std::size_t base_distance = 0;
    std::size_t max_lamp_radius = 0;
    std::optional<ConvergenceRecord> record;
  };
  const IncrementSampler sampler(mu);
  auto results = parallel_map(N, ctx.workers, [&](std::size_t i) {
    Result res;
    res.seed = derive_seed(ctx.seed, i);
    ConvergenceTracker tracker(max_depth, start);
    GroupElement z = simulate(mu, sampler, start, horizon, res.seed,
                              [&](std::size_t step, std::size_t atom, const Walker& w, const StepDelta& d) {
                                tracker.observe(step, w.state(), d);
                                res.max_lamp_radius = std::max(res.max_lamp_radius, sampler.lamp_radius(atom));
                              });
    res.distance = ctx.group.distance(start, z);
    res.base_distance = tree_distance(start.x, z.x);
    res.record = tracker.finish(z, horizon, fraction);
    return res;
  });

  Outcome out;
  std::size_t converged = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const Result& res = results[i];
    const ConvergenceRecord& rec = *res.record;
    const bool ok = rec.prefix_stable(max_depth) && rec.lamps_stable(max_depth);
    converged += ok;
    out.rows.push_back({std::uint64_t{i}, res.seed, std::uint64_t{horizon}, std::uint64_t{res.distance},
                        std::uint64_t{res.base_distance}, std::uint64_t{rec.prefix_depth},
                        signed_cell(rec.lamp_radius), std::uint64_t{rec.stabilization_time(max_depth)},
                        std::uint64_t{res.max_lamp_radius}, rec.stabilized(), ok,
                        rec.end_prefix ? format_word(rec.end_prefix->prefix()) : std::string("o")});
    if (res.distance > horizon * max_step)
      out.violations.push_back("trajectory " + std::to_string(i) + ": distance exceeds horizon times step length");
    if (res.base_distance > res.distance)
      out.violations.push_back("trajectory " + std::to_string(i) + ": base distance exceeds group distance");
  }
  out.summary = std::to_string(converged) + " of " + std::to_string(N) + " trajectories stable to depth " +
                std::to_string(max_depth);
  return out;
}

// ------------------------------------------------------------------ escape

Outcome cmd_escape(Context& ctx) {
  const MeasureSpec mu = ctx.measure();
  const std::size_t N = size_field(ctx.config, "N");
  std::vector<std::size_t> ns;
  const Json& n = require(ctx.config, "", "n");
  if (n.is_array()) {
    for (std::size_t i = 0; i < n.size(); ++i) ns.push_back(get_value<std::size_t>(n[i], indexed("n", i)));
  } else {
    ns.push_back(get_value<std::size_t>(n, "n"));
  }
  Outcome out;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    if (ns[j] == 0) throw ConfigError(indexed("n", j), "must be >= 1");
    EscapeEstimate e = escape_rates(mu, ns[j], N, derive_seed(ctx.seed, j), ctx.workers);
    // One-sided 99% normal quantile.
    const double m_lower = e.m_hat - 2.3263478740408408 * e.m_se;
    out.rows.push_back({std::uint64_t{e.n}, std::uint64_t{e.trajectories}, e.ell_hat, e.ell_se, e.m_hat, e.m_se,
                        m_lower});
    if (e.ell_hat + 1e-12 < e.m_hat) out.violations.push_back("n=" + std::to_string(e.n) + ": ell_hat < m_hat");
    out.summary = "m_hat=" + std::to_string(e.m_hat) + " ell_hat=" + std::to_string(e.ell_hat);
  }
  return out;
}

// ----------------------------------------------------------------- measure

Outcome cmd_measure(Context& ctx) {
  const MeasureSpec mu = ctx.measure();
  const std::size_t N = size_field(ctx.config, "N");
  const std::size_t horizon = horizon_field(ctx.config);
  const double fraction = fraction_field(ctx.config);

  std::vector<CylinderEvent> events;
  const bool partition = !ctx.config.contains("events");
  if (partition) {
    const std::size_t depth = size_field_or(ctx.config, "partition_depth", 1);
    if (depth == 0) throw ConfigError("partition_depth", "must be >= 1");
    events = end_cylinders(ctx.group.base(), depth);
  } else {
    const Json& list = array_field(ctx.config, "", "events");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = indexed("events", i);
      TreeVertex p = word_field(ctx, require(list[i], path, "prefix"), join_path(path, "prefix"));
      if (p.is_root()) throw ConfigError(join_path(path, "prefix"), "must not be the root");
      CylinderEvent e{EndPrefix(std::move(p)), {}};
      if (list[i].contains("lamps")) {
        const Json& lamps = array_field(list[i], path, "lamps");
        for (std::size_t k = 0; k < lamps.size(); ++k) {
          const std::string lp = indexed(join_path(path, "lamps"), k);
          if (!lamps[k].is_array() || lamps[k].size() != 2) throw ConfigError(lp, "expected [vertex, state]");
          e.lamp_window.emplace_back(word_field(ctx, lamps[k][0], lp), get_value<int>(lamps[k][1], lp));
        }
      }
      events.push_back(std::move(e));
    }
  }

  HarmonicEstimate est = estimate_harmonic_measure(mu, events, N, horizon, ctx.seed, {fraction, ctx.workers});
  Outcome out;
  std::size_t hits = 0;
  for (std::size_t j = 0; j < events.size(); ++j) {
    Configuration window = ctx.group.zero();
    for (const auto& [v, s] : events[j].lamp_window) window.set(v, s);
    const EventEstimate& e = est.events[j];
    hits += e.hits;
    out.rows.push_back({std::uint64_t{j}, format_word(events[j].end_prefix.prefix()), format_configuration(window),
                        e.p_hat, e.std_err, std::uint64_t{e.hits}, std::uint64_t{e.indeterminate},
                        std::uint64_t{est.not_stabilized}});
  }
  if (partition && !events.empty()) {
    const std::size_t ind = est.events.front().indeterminate;
    for (const auto& e : est.events)
      if (e.indeterminate != ind) out.violations.push_back("partition events disagree on indeterminate count");
    if (hits + ind != N) out.violations.push_back("partition hits plus indeterminate do not add up to N");
    out.summary = "partition mass " + std::to_string(static_cast<double>(hits) / static_cast<double>(N)) +
                  ", indeterminate " + std::to_string(ind);
  }
  return out;
}

// ------------------------------------------------------------------- green

Outcome cmd_green(Context& ctx) {
  const std::string walk = get_field_or<std::string>(ctx.config, "", "walk", "projected");
  std::optional<TreeMeasure> tree_mu;
  if (walk == "srw")
    tree_mu.emplace(simple_random_walk(ctx.group.base()));
  else if (walk == "projected")
    tree_mu.emplace(project_measure(ctx.measure()));
  else
    throw ConfigError("walk", "expected \"srw\" or \"projected\"");

  const std::size_t N = size_field(ctx.config, "N");
  const std::size_t horizon = horizon_field(ctx.config);
  const bool ratio = get_field_or<bool>(ctx.config, "", "ratio", false);

  std::vector<std::pair<TreeVertex, TreeVertex>> pairs;
  std::vector<std::uint64_t> seeds;
  if (ctx.config.contains("distances")) {
    const Json& ds = array_field(ctx.config, "", "distances");
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const std::size_t d = get_value<std::size_t>(ds[i], indexed("distances", i));
      pairs.emplace_back(TreeVertex{}, ctx.group.base().ray_vertex(d));
      seeds.push_back(derive_seed(derive_seed(ctx.seed, 0), d));
    }
  }
  if (ctx.config.contains("pairs")) {
    const Json& ps = array_field(ctx.config, "", "pairs");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string path = indexed("pairs", i);
      if (!ps[i].is_array() || ps[i].size() != 2) throw ConfigError(path, "expected [x, y]");
      pairs.emplace_back(word_field(ctx, ps[i][0], path), word_field(ctx, ps[i][1], path));
      seeds.push_back(derive_seed(derive_seed(ctx.seed, 1), i));
    }
  }
  if (pairs.empty()) throw ConfigError("distances", "missing field (give distances or pairs)");

  Outcome out;
  const double q = ctx.group.q();
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto& [x, y] = pairs[j];
    KernelEstimate k = estimate_green(*tree_mu, x, y, N, horizon, seeds[j], ctx.workers);
    const std::size_t d = tree_distance(x, y);
    Row row{format_word(x), format_word(y), std::uint64_t{d}, k.G_hat, k.G_se, k.F_hat, k.F_se, k.G_half,
            k.G_half_se, k.F_half, k.F_half_se, k.truncation_bias, std::pow(q, -static_cast<double>(d))};
    if (ratio) {
      KernelEstimate kyy = estimate_green(*tree_mu, y, y, N, horizon, derive_seed(derive_seed(ctx.seed, 2), j),
                                          ctx.workers);
      const double rt = k.G_hat / kyy.G_hat;
      const double rse = std::abs(rt) * std::hypot(k.G_se / k.G_hat, kyy.G_se / kyy.G_hat);
      row.insert(row.end(), {kyy.G_hat, kyy.G_se, rt, rse});
    } else {
      row.insert(row.end(), {std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{}});
    }
    out.rows.push_back(std::move(row));
    const std::string where = "pair " + std::to_string(j);
    if (k.F_hat < 0.0 || k.F_hat > 1.0) out.violations.push_back(where + ": F_hat outside [0, 1]");
    if (k.G_hat < 0.0) out.violations.push_back(where + ": negative G_hat");
    if (x == y && k.F_hat != 1.0) out.violations.push_back(where + ": F_hat(x, x) != 1");
  }
  return out;
}

// --------------------------------------------------------------- dirichlet

Outcome cmd_dirichlet(Context& ctx) {
  const MeasureSpec mu = ctx.measure();
  const Json& fj = require(ctx.config, "", "function");
  Json fdoc;
  if (fj.is_string())
    fdoc = read_json_file(resolve(ctx.config_dir, fj.get<std::string>()).string());
  else
    fdoc = fj;
  const BoundaryFunction f = boundary_function_from_json(ctx.group.base(), fdoc, "function");
  ctx.echo["function"] = boundary_function_to_json(f);

  const std::size_t N = size_field(ctx.config, "N");
  DirichletOptions opts;
  opts.horizon = horizon_field(ctx.config);
  opts.final_fraction = fraction_field(ctx.config);
  opts.workers = ctx.workers;
  const std::string policy = get_field_or<std::string>(ctx.config, "", "policy", "exclude");
  if (policy == "bounds")
    opts.policy = IndeterminatePolicy::bounds;
  else if (policy != "exclude")
    throw ConfigError("policy", "expected \"exclude\" or \"bounds\"");

  Outcome out;
  const double lo = f.min_value(), hi = f.max_value();
  auto check = [&](const HarmonicValue& v, const std::string& where) {
    if (v.determinate + v.indeterminate != N) out.violations.push_back(where + ": trajectory counts do not add up");
    if (v.determinate > 0 && (v.h_hat < lo - 1e-12 || v.h_hat > hi + 1e-12))
      out.violations.push_back(where + ": h_hat outside the range of f");
  };
  auto value_row = [](const std::string& kind, std::size_t index, Cell depth, const GroupElement& g,
                      const HarmonicValue& v) -> Row {
    return {kind, std::uint64_t{index}, depth, format_element(g), v.h_hat, v.std_err,
            std::uint64_t{v.determinate}, std::uint64_t{v.indeterminate}, v.lower, v.upper, std::monostate{},
            std::monostate{}};
  };

  bool any = false;
  if (ctx.config.contains("points")) {
    any = true;
    const Json& pts = array_field(ctx.config, "", "points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      GroupElement g = element_field(ctx, pts[i], indexed("points", i));
      HarmonicValue v = dirichlet_estimate(mu, f, g, N, derive_seed(derive_seed(ctx.seed, 0), i), opts);
      check(v, indexed("points", i));
      out.rows.push_back(value_row("point", i, std::monostate{}, g, v));
    }
  }
  if (ctx.config.contains("sequence")) {
    any = true;
    const Json& seq = ctx.config["sequence"];
    BoundaryPoint beta = boundary_field(ctx, require(seq, "sequence", "boundary_point"), "sequence.boundary_point");
    SequenceSpec spec;
    const Json& ds = array_field(seq, "sequence", "depths");
    for (std::size_t i = 0; i < ds.size(); ++i)
      spec.depths.push_back(get_value<std::size_t>(ds[i], indexed("sequence.depths", i)));
    std::vector<SequenceRow> rows;
    try {
      rows = dirichlet_boundary_convergence(mu, f, beta, spec, N, derive_seed(ctx.seed, 1), opts);
    } catch (const UnresolvedAtDepth& e) {
      throw ConfigError("sequence.depths", e.what());
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      check(rows[i].value, indexed("sequence", i));
      out.rows.push_back(value_row("sequence", i, std::uint64_t{rows[i].depth}, rows[i].g, rows[i].value));
    }
  }
  if (ctx.config.contains("residual_points")) {
    any = true;
    const Json& pts = array_field(ctx.config, "", "residual_points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      GroupElement g = element_field(ctx, pts[i], indexed("residual_points", i));
      Residual r = mean_value_residual(mu, f, g, N, derive_seed(derive_seed(ctx.seed, 2), i), opts);
      out.rows.push_back({std::string("residual"), std::uint64_t{i}, std::monostate{}, format_element(g), r.h_center,
                          std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{},
                          r.residual, r.combined_std_err});
    }
  }
  if (!any) throw ConfigError("points", "missing field (give points, sequence or residual_points)");
  return out;
}

// ------------------------------------------------------------------- strip

Outcome cmd_strip(Context& ctx) {
  const std::size_t radius = size_field(ctx.config, "radius");
  const std::size_t instances = size_field_or(ctx.config, "instances", 0);
  const std::size_t g_length = size_field_or(ctx.config, "g_length", 3);
  const std::size_t max_radius = size_field_or(ctx.config, "max_radius", radius);
  const std::size_t lamp_radius = size_field_or(ctx.config, "lamp_radius", 3);

  BoundaryPoint beta{ctx.group.zero(), EndPrefix(ctx.group.base().generators()[0])};
  BoundaryPoint beta_check = beta;
  const bool given = ctx.config.contains("beta") || ctx.config.contains("beta_check");
  if (given) {
    beta = boundary_field(ctx, require(ctx.config, "", "beta"), "beta");
    beta_check = boundary_field(ctx, require(ctx.config, "", "beta_check"), "beta_check");
    if (beta.end.depth() <= max_radius || beta_check.end.depth() <= max_radius)
      throw ConfigError("beta", "end prefixes must be longer than max_radius");
  } else {
    Rng rng(derive_seed(ctx.seed, 0));
    auto inst = random_strip_instance(ctx.group, rng, max_radius + 1, lamp_radius, 0);
    beta = std::move(inst.beta);
    beta_check = std::move(inst.beta_check);
  }
  ctx.echo["strip_pair"] = {format_boundary_point(beta), format_boundary_point(beta_check)};

  Outcome out;
  const GroupElement id = ctx.group.identity();
  for (std::size_t n = 0; n <= max_radius; ++n) {
    std::vector<GroupElement> pts;
    try {
      pts = strip_points_in_ball(ctx.group, {beta, beta_check, n});
    } catch (const YNotOnGeodesic& e) {
      throw ConfigError("beta", e.what());
    }
    std::size_t in_group_ball = 0;
    for (const auto& s : pts) in_group_ball += ctx.group.distance(id, s) <= n;
    const bool ok = pts.size() <= 2 * n + 1;
    if (!ok) out.violations.push_back("strip count above 2n+1 at n=" + std::to_string(n));
    out.rows.push_back({std::string("count"), std::uint64_t{n}, std::monostate{}, std::uint64_t{pts.size()},
                        std::uint64_t{in_group_ball}, std::uint64_t{2 * n + 1}, ok});
  }

  std::size_t passed = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(derive_seed(ctx.seed, i + 1));
    auto inst = random_strip_instance(ctx.group, rng, radius + g_length + 1, lamp_radius, g_length);
    const bool ok = verify_strip_equivariance(ctx.group, inst.g, inst.beta, inst.beta_check, radius);
    passed += ok;
    if (!ok) out.violations.push_back("equivariance failed for instance " + std::to_string(i));
    out.rows.push_back({std::string("equivariance"), std::uint64_t{radius}, std::uint64_t{i}, std::monostate{},
                        std::monostate{}, std::monostate{}, ok});
  }
  out.summary = "strip counts checked to n=" + std::to_string(max_radius) + "; equivariance " +
                std::to_string(passed) + "/" + std::to_string(instances);
  return out;
}

// ------------------------------------------------------------ metric-check

Outcome cmd_metric_check(Context& ctx) {
  const std::size_t radius = size_field(ctx.config, "radius");
  if (radius > 6) throw ConfigError("radius", "must be <= 6 (the oracle ball has radius 2 * radius)");
  const auto big = ctx.group.ball(2 * radius);
  std::vector<const GroupElement*> small;
  for (const auto& [g, d] : big)
    if (d <= radius) small.push_back(&g);

  std::uint64_t pairs = 0, mismatches = 0;
  for (const GroupElement* g : small) {
    const GroupElement g_inv = ctx.group.inv(*g);
    for (const GroupElement* h : small) {
      ++pairs;
      auto it = big.find(ctx.group.mul(g_inv, *h));
      if (it == big.end() || it->second != ctx.group.distance(*g, *h)) ++mismatches;
    }
  }
  Outcome out;
  const std::string status = mismatches == 0 ? "all pairs match" : "mismatch";
  out.rows.push_back({std::uint64_t{radius}, std::uint64_t{small.size()}, std::uint64_t{big.size()}, pairs,
                      mismatches, status});
  if (mismatches) out.violations.push_back(std::to_string(mismatches) + " pairs disagree with graph distance");
  out.summary = status;
  return out;
}

// ---------------------------------------------------------------- plumbing

const std::vector<Command>& commands() {
  static const std::vector<Command> list = {
      {"simulate",
       "per-trajectory distances and stabilization statistics",
       {"N", "horizon", "n", "max_depth", "final_fraction", "start"},
       {{"trajectory", "index i of the trajectory"},
        {"seed", "stream seed derive_seed(master_seed, i)"},
        {"steps", "number of steps simulated"},
        {"final_distance", "lamplighter distance d(Z_n, Z_0)"},
        {"final_base_distance", "tree distance d(X_n, X_0)"},
        {"prefix_depth", "deepest end prefix unchanged over the final window"},
        {"lamp_radius", "largest k with all lamps in B(o,k) unchanged over the final window (-1: none)"},
        {"stabilization_time", "last change of the depth-max_depth prefix or of lamps in B(o,max_depth)"},
        {"max_increment_lamp_radius", "max over steps of the farthest lamp an increment lights"},
        {"stabilized", "prefix_depth >= 1"},
        {"converged", "prefix and lamps stable to max_depth"},
        {"end_prefix", "stable end prefix as a word"}},
       cmd_simulate},
      {"escape",
       "rates of escape of the walk and of its projection to the tree",
       {"N", "n"},
       {{"n", "number of steps"},
        {"trajectories", "number of walks N"},
        {"ell_hat", "mean of d(Z_n, id)/n"},
        {"ell_se", "standard error of ell_hat"},
        {"m_hat", "mean of |X_n|/n"},
        {"m_se", "standard error of m_hat"},
        {"m_lower_99", "one-sided 99% lower confidence bound for m"}},
       cmd_escape},
      {"measure",
       "harmonic measure of cylinder sets",
       {"N", "horizon", "n", "final_fraction", "partition_depth", "events"},
       {{"event", "index of the event"},
        {"prefix", "end prefix of the cylinder"},
        {"lamps", "required lamp states on the window"},
        {"p_hat", "hits / N"},
        {"std_err", "binomial standard error of p_hat"},
        {"hits", "trajectories whose limit lies in the event"},
        {"indeterminate", "trajectories not resolved deeply enough to decide"},
        {"not_stabilized", "trajectories without a stable first letter"}},
       cmd_measure},
      {"green",
       "Green kernel and hitting probabilities of a walk on the tree",
       {"walk", "N", "horizon", "n", "distances", "pairs", "ratio"},
       {{"x", "start vertex"},
        {"y", "target vertex"},
        {"distance", "d(x, y)"},
        {"G_hat", "mean visits to y within the horizon"},
        {"G_se", "standard error of G_hat"},
        {"F_hat", "fraction of walks that reach y"},
        {"F_se", "standard error of F_hat"},
        {"G_half", "G_hat with half the horizon"},
        {"G_half_se", "standard error of G_half"},
        {"F_half", "F_hat with half the horizon"},
        {"F_half_se", "standard error of F_half"},
        {"truncation_bias", "G_hat and G_half differ by more than 2 combined SE"},
        {"srw_reference", "q^-d, the hitting probability of simple random walk"},
        {"G_yy", "G_hat(y, y) (with ratio=true)"},
        {"G_yy_se", "standard error of G_yy"},
        {"G_ratio", "G_hat / G_yy, an independent estimate of F"},
        {"G_ratio_se", "delta-method standard error of G_ratio"}},
       cmd_green},
      {"dirichlet",
       "harmonic extension of a locally constant boundary function",
       {"function", "N", "horizon", "n", "final_fraction", "policy", "points", "sequence", "residual_points"},
       {{"kind", "point, sequence or residual"},
        {"index", "position in the corresponding config list"},
        {"depth", "k for sequence rows"},
        {"g", "group element"},
        {"h_hat", "estimate of h(g) (residual rows: the centre value)"},
        {"std_err", "standard error of h_hat"},
        {"determinate", "trajectories whose limit decides f"},
        {"indeterminate", "trajectories excluded as undecided"},
        {"lower", "h_hat with undecided trajectories at min f (policy bounds)"},
        {"upper", "h_hat with undecided trajectories at max f (policy bounds)"},
        {"residual", "|h(g) - sum_s mu(s) h(g s)|"},
        {"residual_se", "combined standard error of the residual"}},
       cmd_dirichlet},
      {"strip",
       "strip growth counts and equivariance checks",
       {"radius", "instances", "g_length", "max_radius", "lamp_radius", "beta", "beta_check"},
       {{"kind", "count or equivariance"},
        {"n", "ball radius"},
        {"instance", "random instance index (equivariance rows)"},
        {"count", "strip points (eta_y, y) with d(o, y) <= n"},
        {"count_group_ball", "strip points at lamplighter distance <= n from id"},
        {"bound", "2n + 1"},
        {"pass", "the check succeeded"}},
       cmd_strip},
      {"metric-check",
       "lamplighter distance against breadth-first search",
       {"radius"},
       {{"radius", "pairs range over B(id, radius)"},
        {"ball_size", "|B(id, radius)|"},
        {"oracle_ball_size", "|B(id, 2 radius)| explored by breadth-first search"},
        {"pairs", "number of ordered pairs compared"},
        {"mismatches", "pairs whose distance disagrees with the graph distance"},
        {"status", "all pairs match | mismatch"}},
       cmd_metric_check},
  };
  return list;
}

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::isnan(v)) return "nan";
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.17g", v);
          return buf;
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
          return q + "\"";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

Json json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>)
          return nullptr;
        else
          return v;
      },
      c);
}

void write_table(std::ostream& os, const std::string& format, const Json& echo, const std::vector<Column>& columns,
                 const std::vector<Row>& rows) {
  if (format == "csv") {
    os << "# " << echo.dump() << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i].name;
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
      os << '\n';
    }
  } else {
    os << echo.dump() << '\n';
    for (const auto& row : rows) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[columns[i].name] = json_cell(row[i]);
      os << obj.dump() << '\n';
    }
  }
}

int execute(const Command& cmd, const std::string& config_path, unsigned workers, const std::string& out_path,
            std::ostream& out, std::ostream& err) {
  Json config = read_json_file(config_path);
  if (!config.is_object()) throw ConfigError("", "config must be a JSON object");

  std::set<std::string> allowed(kCommonFields.begin(), kCommonFields.end());
  allowed.insert(cmd.fields.begin(), cmd.fields.end());
  for (const auto& [key, value] : config.items())
    if (!allowed.count(key)) throw ConfigError(key, "unknown field for '" + cmd.name + "'");

  const std::string format = get_field_or<std::string>(config, "", "format", "csv");
  if (format != "csv" && format != "jsonl") throw ConfigError("format", "expected \"csv\" or \"jsonl\"");

  const FreeProductSignature sig = signature_from_json(require(config, "", "signature"), "signature");
  const int r = get_field<int>(config, "", "r");
  if (r < 2) throw ConfigError("r", "must be >= 2");

  Context ctx{config, std::filesystem::path(config_path).parent_path(), Lamplighter(sig, r),
              get_field<std::uint64_t>(config, "", "master_seed"), workers, Json::object()};
  ctx.echo["command"] = cmd.name;
  ctx.echo["config"] = config;

  Outcome result = cmd.run(ctx);
  for (const auto& row : result.rows)
    if (row.size() != cmd.columns.size()) throw std::logic_error("row width does not match the schema");

  std::string target = out_path;
  if (target.empty() && config.contains("output")) target = get_value<std::string>(config["output"], "output");
  if (target.empty()) {
    write_table(out, format, ctx.echo, cmd.columns, result.rows);
  } else {
    std::ofstream file(target, std::ios::binary);
    if (!file) throw ConfigError("output", "cannot write '" + target + "'");
    write_table(file, format, ctx.echo, cmd.columns, result.rows);
  }
  if (!result.summary.empty()) err << cmd.name << ": " << result.summary << '\n';
  return report_violations(result.violations, err);
}

}  // namespace

int report_violations(const std::vector<std::string>& violations, std::ostream& err) {
  for (const auto& v : violations) err << "invariant violated: " << v << '\n';
  return violations.empty() ? kExitSuccess : kExitInvariantViolation;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random walks on lamplighter groups over homogeneous trees", "lamptree"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  unsigned workers = 1;
  bool schema = false;
  for (const auto& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--workers", workers, "worker threads (results do not depend on it)")
        ->check(CLI::Range(1u, 1024u));
    sub->add_option("--out", out_path, "output file (overrides the config's output field)");
    sub->add_flag("--schema", schema, "print the output columns and exit");
  }

  std::vector<const char*> argv{"lamptree"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const Command* cmd = nullptr;
  for (const auto& c : commands())
    if (app.got_subcommand(c.name)) cmd = &c;

  if (schema) {
    out << "column,description\n";
    for (const auto& col : cmd->columns) out << col.name << "," << csv_cell(col.description) << '\n';
    return kExitSuccess;
  }
  if (config_path.empty()) {
    err << "usage error: --config is required\n";
    return kExitConfigError;
  }

  try {
    return execute(*cmd, config_path, workers, out_path, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const UnresolvedAtDepth& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfigError;
}

}  // namespace lamptree::cli
