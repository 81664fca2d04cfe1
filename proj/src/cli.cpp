#include "cpphase/cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpphase/config.hpp"
#include "cpphase/contact.hpp"
#include "cpphase/cuts.hpp"
#include "cpphase/error.hpp"
#include "cpphase/graph.hpp"
#include "cpphase/models.hpp"
#include "cpphase/output.hpp"
#include "cpphase/phase.hpp"
#include "cpphase/renorm.hpp"
#include "cpphase/rng.hpp"
#include "cpphase/rwre.hpp"
#include "cpphase/star.hpp"

#ifndef CPPHASE_VERSION
#define CPPHASE_VERSION "dev"
#endif

namespace cpphase::cli {

using nlohmann::json;

namespace {

json interval_json(const stats::Interval& i) { return json::array({json_real(i.lo), json_real(i.hi)}); }

json proportion_json(const stats::Proportion& p) {
  return {{"successes", p.successes}, {"trials", p.trials}, {"estimate", json_real(p.estimate)},
          {"se", json_real(p.se)}, {"ci", interval_json(p.ci)}};
}

// Everything a subcommand produces: a JSON summary, an optional table and an
// optional edge list. The format flag picks which one goes to --out.
struct Result {
  json summary = json::object();
  std::optional<CsvTable> table;
  std::optional<WindowedGraph> graph;
  std::vector<std::string> graph_comments;
};

struct Common {
  ModelArgs model;
  std::string graph_path;
  std::size_t window = 10001;
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  std::optional<std::size_t> margin;
  std::string mode;
  double level = 0.95;
};

void add_model_options(CLI::App* app, Common& c) {
  app->add_option("--model", c.model.model, "lrp | path | gilbert | wdrcm | boolean-lattice | clique-chain")
      ->capture_default_str();
  app->add_option("--delta", c.model.delta, "LRP exponent, phi(k) = k^-delta")->capture_default_str();
  app->add_option("--phi-table", c.model.phi_table, "explicit LRP table phi(1),phi(2),...");
  app->add_flag("--augment", c.model.augment, "add all nearest-neighbour links");
  app->add_option("--gamma", c.model.gamma, "WDRCM / Boolean-lattice exponent");
  app->add_option("--mu", c.model.mu, "WDRCM truncation exponent")->capture_default_str();
  app->add_option("--alpha", c.model.alpha, "Pareto tail of radii or clique sizes")->capture_default_str();
  app->add_option("--dimension", c.model.dimension, "lattice dimension")->capture_default_str();
  app->add_option("--points", c.model.points, "unit | renewal | poisson")->capture_default_str();
  app->add_option("--radius", c.model.radius, "pareto | constant")->capture_default_str();
  app->add_option("--radius-scale", c.model.radius_scale)->capture_default_str();
  app->add_option("--radius-value", c.model.radius_value)->capture_default_str();
  app->add_option("--clique", c.model.clique, "constant | pareto")->capture_default_str();
  app->add_option("--clique-size", c.model.clique_size)->capture_default_str();
}

void add_io_options(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "master seed")->capture_default_str();
  app->add_option("--out", c.out, "output path; a manifest is written next to it");
  app->add_option("--format", c.format, "json | csv | edges; default edges for generate, json otherwise");
}

void add_graph_options(CLI::App* app, Common& c) {
  add_model_options(app, c);
  app->add_option("--graph", c.graph_path, "edge-list file instead of a fresh draw");
  app->add_option("--window", c.window, "window length")->capture_default_str();
  app->add_option("--margin", c.margin, "boundary margin");
}

WindowedGraph obtain_graph(const Common& c) {
  if (!c.graph_path.empty()) return load_edge_list(c.graph_path);
  if (is_lattice(c.model)) throw SpecError("this subcommand needs a one-dimensional model");
  return generate(build_model(c.model), Window::of_length(c.window), derive_stream(c.seed, "graph", 0));
}

json graph_source(const Common& c) {
  if (!c.graph_path.empty()) return {{"graph", c.graph_path}};
  return {{"model", model_json(c.model)}, {"window", c.window}};
}

GraphMode parse_mode(const std::string& m) {
  if (m == "quenched") return GraphMode::quenched;
  if (m == "annealed") return GraphMode::annealed;
  throw SpecError("--mode quenched|annealed is required");
}

// ---- generate

Result do_generate(const Common& c, const std::string& box_text) {
  Result r;
  const std::uint64_t s = derive_stream(c.seed, "graph", 0);
  if (is_lattice(c.model)) {
    auto spec = std::get<BooleanLatticeSpec>(build_model(c.model));
    std::vector<int> box;
    if (box_text.empty()) {
      box.assign(static_cast<std::size_t>(spec.dimension), static_cast<int>(c.window));
    } else {
      for (auto v : parse_size_list(box_text)) box.push_back(static_cast<int>(v));
    }
    const auto g = boolean_lattice_generate(spec, box, s);
    r.graph = lattice_as_windowed(g);
    std::string dims = "lattice";
    for (int b : box) dims += " " + std::to_string(b);
    r.graph_comments.push_back(dims);
  } else {
    r.graph = generate(build_model(c.model), Window::of_length(c.window), s);
  }
  const auto st = edge_density(*r.graph);
  r.summary = {{"vertices", st.n}, {"edges", st.edge_count}, {"mean_degree", json_real(st.empirical_mean_degree)},
               {"augmented", r.graph->augmented()}};
  return r;
}

// ---- cuts

Result do_cuts(const Common& c, std::size_t K, std::optional<std::size_t> L, bool no_thin) {
  const auto g = obtain_graph(c);
  DecompositionOptions d;
  d.K = K;
  d.L = L;
  d.thin = !no_thin;
  d.margin = c.margin;
  const auto dec = block_decomposition(g, d);
  BlockStatsOptions so;
  so.seed = derive_stream(c.seed, "cuts-bootstrap", 0);
  const auto bs = block_statistics(dec, g, so);
  Result r;
  r.summary = {{"source", graph_source(c)},
               {"K", K},
               {"L", L ? json(*L) : json(nullptr)},
               {"thinned", dec.thinned},
               {"links", json::array({dec.links.lo, dec.links.hi})},
               {"raw_cuts", dec.raw_cuts.size()},
               {"cut_points", dec.cut_points.size()},
               {"blocks", bs.blocks},
               {"p_hat", json_real(bs.p_hat)},
               {"mean_block", json_real(bs.mean_block)},
               {"mean_block_ci", interval_json(bs.mean_block_ci)},
               {"mean_block_sq", json_real(bs.mean_block_sq)},
               {"mean_block_sq_ci", interval_json(bs.mean_block_sq_ci)},
               {"tau_hat", json_real(bs.tau_hat)},
               {"mean_block_edges", json_real(bs.mean_block_edges)},
               {"delta_hat", json_real(bs.delta_hat)},
               {"edge_bound", json_real(bs.edge_bound)},
               {"kac_residual", json_real(bs.kac_residual)},
               {"kac_within_band", bs.kac_within_band},
               {"kac_residual_sq", json_real(bs.kac_residual_sq)},
               {"kac_sq_within_band", bs.kac_sq_within_band}};
  CsvTable t({"block", "lo", "hi", "size", "edges"});
  t.meta("K", std::to_string(K));
  t.meta("p_hat", format_real(bs.p_hat));
  for (std::size_t i = 0; i < dec.blocks.size(); ++i)
    t.row({static_cast<std::uint64_t>(i), static_cast<std::int64_t>(dec.blocks[i].lo),
           static_cast<std::int64_t>(dec.blocks[i].hi), static_cast<std::uint64_t>(dec.blocks[i].length()),
           static_cast<std::uint64_t>(dec.block_edges[i])});
  r.table = std::move(t);
  return r;
}

// ---- simulate

json survival_json(const SurvivalEstimate& e) {
  return {{"lambda", e.lambda}, {"window", e.window},       {"horizon", e.horizon},
          {"replicas", e.replicas}, {"extinct", e.extinct}, {"alive", e.alive},
          {"censored", e.censored}, {"upper", proportion_json(e.upper)}, {"lower", proportion_json(e.lower)}};
}

const std::vector<std::string> kSurvivalColumns = {
    "window", "horizon", "lambda", "replicas", "extinct", "alive", "censored",
    "upper", "upper_lo", "upper_hi", "lower", "lower_lo", "lower_hi"};

std::vector<CsvCell> survival_row(const SurvivalEstimate& e) {
  return {static_cast<std::uint64_t>(e.window), e.horizon, e.lambda, static_cast<std::uint64_t>(e.replicas),
          e.extinct, e.alive, e.censored, e.upper.estimate, e.upper.ci.lo, e.upper.ci.hi,
          e.lower.estimate, e.lower.ci.lo, e.lower.ci.hi};
}

SurvivalOptions survival_options(const Common& c, std::uint64_t budget) {
  SurvivalOptions o;
  o.level = c.level;
  o.margin = c.margin;
  o.event_budget = budget;
  o.graph_seed = derive_stream(c.seed, "graph", 0);
  return o;
}

Result do_simulate(const Common& c, double lambda, std::optional<double> horizon, std::size_t replicas,
                   std::uint64_t budget) {
  auto o = survival_options(c, budget);
  SurvivalEstimate e;
  std::string mode;
  if (!c.graph_path.empty()) {
    const auto g = load_edge_list(c.graph_path);
    e = survival_probability(g, lambda, horizon.value_or(static_cast<double>(g.size()) / 4.0), replicas,
                             derive_stream(c.seed, "simulate", 0), o);
    mode = "quenched";
  } else {
    o.mode = parse_mode(c.mode);
    e = survival_probability(build_model(c.model), lambda, c.window,
                             horizon.value_or(static_cast<double>(c.window) / 4.0), replicas,
                             derive_stream(c.seed, "simulate", 0), o);
    mode = c.mode;
  }
  Result r;
  r.summary = survival_json(e);
  r.summary["mode"] = mode;
  r.summary["source"] = graph_source(c);
  CsvTable t(kSurvivalColumns);
  t.meta("mode", mode);
  t.row(survival_row(e));
  r.table = std::move(t);
  return r;
}

// ---- sweep

Result do_sweep(const Common& c, const std::string& grid_text, const std::string& windows_text,
                const std::string& horizons_text, std::size_t replicas, bool independent, double threshold,
                const std::string& bracket_text, double precision, std::uint64_t budget) {
  const auto spec = build_model(c.model);
  const auto grid = parse_real_list(grid_text);
  const auto windows = windows_text.empty() ? std::vector<std::size_t>{c.window} : parse_size_list(windows_text);
  const auto horizons = parse_real_list(horizons_text);
  SweepOptions so;
  so.survival = survival_options(c, budget);
  so.survival.mode = parse_mode(c.mode);
  so.threshold = threshold;
  so.shared_randomness = !independent;

  Result r;
  CsvTable t([] {
    auto cols = kSurvivalColumns;
    cols.push_back("smoothed_upper");
    cols.push_back("smoothed_lower");
    return cols;
  }());
  t.meta("mode", c.mode);
  t.meta("shared_randomness", independent ? "0" : "1");
  t.meta("threshold", format_real(threshold));
  json cells = json::array();
  json crossings = json::array();
  if (!grid.empty()) {
    const auto sw = lambda_sweep(spec, grid, windows, horizons, replicas, derive_stream(c.seed, "sweep", 0), so);
    for (std::size_t w = 0; w < sw.windows.size(); ++w) {
      for (std::size_t l = 0; l < sw.lambdas.size(); ++l) {
        auto row = survival_row(sw.cells[w][l]);
        row.push_back(sw.smoothed_upper[w][l]);
        row.push_back(sw.smoothed_lower[w][l]);
        t.row(std::move(row));
        auto j = survival_json(sw.cells[w][l]);
        j["smoothed_upper"] = json_real(sw.smoothed_upper[w][l]);
        j["smoothed_lower"] = json_real(sw.smoothed_lower[w][l]);
        cells.push_back(j);
      }
      crossings.push_back({{"window", sw.windows[w]},
                           {"horizon", sw.horizons[w]},
                           {"upper", sw.crossing_upper[w] ? json(*sw.crossing_upper[w]) : json(nullptr)},
                           {"lower", sw.crossing_lower[w] ? json(*sw.crossing_lower[w]) : json(nullptr)}});
    }
  }
  r.summary = {{"model", model_json(c.model)}, {"mode", c.mode},   {"threshold", threshold},
               {"shared_randomness", !independent}, {"cells", cells}, {"crossings", crossings}};
  if (!bracket_text.empty()) {
    const auto b = parse_real_list(bracket_text);
    if (b.size() != 2) throw SpecError("--bracket needs lo,hi");
    LambdaCOptions lo;
    lo.survival = so.survival;
    lo.threshold = threshold;
    if (!horizons.empty()) lo.horizon = horizons.front();
    const auto res = estimate_lambda_c(spec, {b[0], b[1]}, precision, windows.front(), replicas,
                                       derive_stream(c.seed, "lambda-c", 0), lo);
    json probes = json::array();
    for (const auto& p : res.probes)
      probes.push_back({{"lambda", p.lambda}, {"window", p.window}, {"horizon", p.horizon},
                        {"replicas", p.replicas}, {"upper", json_real(p.upper)}, {"lower", json_real(p.lower)},
                        {"verdict", to_string(p.verdict)}});
    r.summary["lambda_c"] = {
        {"finite_detected", res.finite_detected},
        {"bracket", interval_json(res.bracket)},
        {"reported", interval_json(res.reported)},
        {"converged", res.converged},
        {"power_exhausted", res.power_exhausted},
        {"stable", res.stable},
        {"doubled_bracket", res.doubled_bracket ? interval_json(*res.doubled_bracket) : json(nullptr)},
        {"probes", probes}};
  }
  r.table = std::move(t);
  return r;
}

// ---- rwre

Result do_rwre(const Common& c, double lambda, std::size_t replicas, std::size_t K, std::optional<std::size_t> L,
               const std::string& omega_mode, std::size_t max_blocks, bool exclude_degenerate, bool cross_validate) {
  const auto g = obtain_graph(c);
  PipelineOptions po;
  po.decomposition.K = K;
  po.decomposition.L = L;
  po.decomposition.margin = c.margin;
  if (omega_mode == "extremal-eta") po.omega.mode = OmegaMode::extremal_eta;
  else if (omega_mode == "plain") po.omega.mode = OmegaMode::plain;
  else throw SpecError("--omega-mode must be extremal-eta or plain");
  po.ledrappier.exclude_degenerate = exclude_degenerate;
  po.max_blocks = max_blocks;
  po.cross_validate = cross_validate;
  const auto rep = pipeline_verdict(g, lambda, replicas, c.seed, po);

  Result r;
  json est = json::array();
  for (const auto& e : rep.estimates)
    est.push_back({{"hits", e.hits}, {"trials", e.trials}, {"censored", e.censored}, {"omega", json_real(e.omega)},
                   {"se", json_real(e.se)}, {"ci", interval_json(e.ci)}, {"degenerate", e.degenerate}});
  r.summary = {{"source", graph_source(c)},
               {"lambda", lambda},
               {"replicas", replicas},
               {"omega_mode", omega_mode},
               {"verdict", to_string(rep.ledrappier.verdict)},
               {"functional", json_real(rep.ledrappier.value)},
               {"functional_ci", interval_json(rep.ledrappier.ci)},
               {"blocks", rep.ledrappier.blocks},
               {"degenerate", rep.ledrappier.degenerate},
               {"distinct_blocks", rep.estimates.size()},
               {"bound_violations", rep.bound_violations},
               {"estimates", est}};
  if (rep.cross_validation) {
    const auto& cv = *rep.cross_validation;
    r.summary["cross_validation"] = {{"runs", cv.runs},
                                     {"blocks_compared", cv.blocks_compared},
                                     {"blocks_agreeing", cv.blocks_agreeing},
                                     {"truncated_runs", cv.truncated_runs},
                                     {"long_steps", cv.long_steps},
                                     {"steps", cv.steps}};
  }
  CsvTable t({"block", "lo", "hi", "size", "edges", "exits", "omega", "omega_se", "lower_bound", "bound_ok"});
  t.meta("lambda", format_real(lambda));
  t.meta("verdict", to_string(rep.ledrappier.verdict));
  for (const auto& b : rep.blocks) {
    const auto& e = rep.estimates[b.problem];
    t.row({static_cast<std::uint64_t>(b.index), static_cast<std::int64_t>(b.block.lo),
           static_cast<std::int64_t>(b.block.hi), static_cast<std::uint64_t>(b.size),
           static_cast<std::uint64_t>(b.edges), static_cast<std::uint64_t>(b.exits), e.omega, e.se, b.lower_bound,
           b.bound_ok});
  }
  r.table = std::move(t);
  return r;
}

// ---- star

StarStart parse_start(const std::string& s) {
  if (s == "K-leaves-plus-root") return StarStart::K_leaves_plus_root;
  if (s == "K-leaves-only") return StarStart::K_leaves_only;
  if (s == "root-only") return StarStart::root_only;
  if (s == "all") return StarStart::all;
  throw SpecError("unknown star start '" + s + "'");
}

json persist_json(const PersistEstimate& p) {
  return {{"K", p.K}, {"floor", p.floor}, {"window_start", p.window_start}, {"probability", proportion_json(p.prob)},
          {"mean_events", json_real(p.mean_events)}};
}

struct StarArgs {
  std::string task = "persist";
  std::size_t leaves = 100;
  std::string k_grid;
  double lambda = 0.5;
  double eps1 = 0.1;
  double horizon = 100.0;
  std::size_t replicas = 1000;
  std::string start = "K-leaves-plus-root";
  double quantile = 0.5;
  double budget = 5e9;
};

Result do_star(const Common& c, const StarArgs& a) {
  Result r;
  StarConfig cfg;
  cfg.k = a.leaves;
  cfg.lambda = a.lambda;
  cfg.initial = parse_start(a.start);
  cfg.eps1 = a.eps1;
  cfg.horizon = a.horizon;
  cfg.replicas = a.replicas;
  cfg.seed = derive_stream(c.seed, "star", 0);
  cfg.level = c.level;
  cfg.event_budget = a.budget;
  if (a.task == "persist" || a.task == "root") {
    const auto p = a.task == "persist" ? star_persist_from_K(cfg) : star_persist_from_root(cfg);
    r.summary = persist_json(p);
    r.summary["task"] = a.task;
    r.summary["leaves"] = a.leaves;
    r.summary["lambda"] = a.lambda;
    r.summary["horizon"] = a.horizon;
    CsvTable t({"leaves", "K", "floor", "window_start", "successes", "trials", "estimate", "ci_lo", "ci_hi"});
    t.meta("task", a.task);
    t.row({static_cast<std::uint64_t>(a.leaves), static_cast<std::uint64_t>(p.K), static_cast<std::uint64_t>(p.floor),
           p.window_start, p.prob.successes, p.prob.trials, p.prob.estimate, p.prob.ci.lo, p.prob.ci.hi});
    r.table = std::move(t);
  } else if (a.task == "leaf") {
    const std::size_t K = star_threshold(a.leaves, a.lambda);
    const auto xs = sample_leaf_recoveries(a.leaves, K, a.lambda, a.replicas, cfg.seed);
    const double m = stats::mean(xs);
    const double se = stats::standard_error(xs);
    r.summary = {{"task", "leaf"}, {"leaves", a.leaves}, {"K", K}, {"lambda", a.lambda},
                 {"mean", json_real(m)}, {"se", json_real(se)},
                 {"expected", json_real(expected_leaf_recoveries(K, a.lambda))}};
  } else if (a.task == "scaling") {
    std::vector<std::size_t> ks = parse_size_list(a.k_grid);
    ScalingOptions so;
    so.initial = cfg.initial;
    so.horizon = a.horizon;
    so.level = c.level;
    so.event_budget = a.budget;
    const auto tab = star_survival_time_scaling(ks, a.lambda, a.quantile, a.replicas, cfg.seed, so);
    json rows = json::array();
    CsvTable t({"k", "K", "quantile", "ci_lo", "ci_hi", "censored"});
    t.meta("lambda", format_real(a.lambda));
    t.meta("q", format_real(a.quantile));
    for (const auto& row : tab.rows) {
      rows.push_back({{"k", row.k}, {"K", row.K}, {"quantile", json_real(row.quantile)},
                      {"ci", interval_json(row.ci)}, {"censored", row.censored}});
      t.row({static_cast<std::uint64_t>(row.k), static_cast<std::uint64_t>(row.K), row.quantile, row.ci.lo,
             row.ci.hi, static_cast<std::uint64_t>(row.censored)});
    }
    r.summary = {{"task", "scaling"}, {"lambda", a.lambda}, {"q", a.quantile}, {"rows", rows},
                 {"fitted_rows", tab.fitted_rows}};
    if (tab.fitted_rows >= 2)
      r.summary["fit"] = {{"intercept", json_real(tab.fit.intercept)}, {"slope", json_real(tab.fit.slope)},
                          {"slope_ci", interval_json(tab.slope_ci)}};
    r.table = std::move(t);
  } else {
    throw SpecError("--task must be persist, root, leaf or scaling");
  }
  return r;
}

// ---- renorm

struct RenormArgs {
  std::string task = "exponent";
  std::string box;
  std::string horizons;
  std::size_t replicas = 100;
  double sub_box = 0.5;
  std::uint64_t budget = 200'000'000;
};

Result do_renorm(const Common& c, RenormConfig cfg, const RenormArgs& a) {
  Result r;
  cfg.dimension = c.model.dimension;
  if (c.model.gamma) cfg.gamma = *c.model.gamma;
  validate(cfg);
  json config = {{"dimension", cfg.dimension}, {"gamma", cfg.gamma}, {"eps", cfg.eps}, {"L", cfg.L},
                 {"lambda", cfg.lambda}, {"c4", cfg.c4}};
  if (a.task == "exponent") {
    const auto e = infection_path_exponent(static_cast<double>(cfg.L), cfg.dimension, cfg.gamma, cfg.eps,
                                           cfg.lambda, cfg.c4);
    r.summary = {{"task", "exponent"}, {"config", config}, {"value", json_real(e.value)},
                 {"positive", e.positive}, {"eventually_positive", e.eventually_positive},
                 {"minimal_L", e.minimal_L ? json_real(*e.minimal_L) : json(nullptr)}};
  } else if (a.task == "field") {
    std::vector<int> box;
    if (a.box.empty()) box.assign(static_cast<std::size_t>(cfg.dimension), static_cast<int>(c.window));
    else for (auto v : parse_size_list(a.box)) box.push_back(static_cast<int>(v));
    const auto g = boolean_lattice_generate(BooleanLatticeSpec{cfg.dimension, cfg.gamma}, box,
                                            derive_stream(c.seed, "graph", 0));
    const auto f = good_box_field(g, cfg.L, cfg.gamma, cfg.eps, c.level);
    CsvTable t({"v", "max_degree", "good"});
    t.meta("L", std::to_string(cfg.L));
    t.meta("threshold", format_real(f.threshold));
    for (const auto& b : f.boxes) {
      std::string v;
      for (std::size_t k = 0; k < b.corner.size(); ++k) v += (k ? ":" : "") + std::to_string(b.corner[k]);
      t.row({v, static_cast<std::uint64_t>(b.max_degree), b.good});
    }
    r.summary = {{"task", "field"}, {"config", config}, {"side", f.side}, {"threshold", f.threshold},
                 {"boxes", f.boxes.size()}, {"good_fraction", proportion_json(f.good_fraction)}};
    r.table = std::move(t);
  } else if (a.task == "survival") {
    std::vector<int> sides;
    for (auto v : parse_size_list(a.box)) sides.push_back(static_cast<int>(v));
    auto horizons = parse_real_list(a.horizons);
    if (horizons.size() == 1) horizons.assign(sides.size(), horizons.front());
    BoxSurvivalOptions bo;
    bo.sub_box_fraction = a.sub_box;
    bo.event_budget = a.budget;
    bo.level = c.level;
    const auto tab = box_survival_experiment(cfg, sides, horizons, a.replicas, derive_stream(c.seed, "renorm", 0), bo);
    CsvTable t({"side", "horizon", "replicas", "initial", "median", "ci_lo", "ci_hi", "censored", "budget_exhausted"});
    t.meta("gamma", format_real(cfg.gamma));
    t.meta("lambda", format_real(cfg.lambda));
    json rows = json::array();
    for (const auto& row : tab.rows) {
      t.row({static_cast<std::int64_t>(row.side), row.horizon, static_cast<std::uint64_t>(row.replicas),
             static_cast<std::uint64_t>(row.initial_size), row.median, row.median_ci.lo, row.median_ci.hi,
             static_cast<std::uint64_t>(row.censored), static_cast<std::uint64_t>(row.budget_exhausted)});
      rows.push_back({{"side", row.side}, {"horizon", row.horizon}, {"median", json_real(row.median)},
                      {"ci", interval_json(row.median_ci)}, {"censored", row.censored},
                      {"budget_exhausted", row.budget_exhausted}});
    }
    json contrasts = json::array();
    for (const auto& cc : tab.contrasts)
      contrasts.push_back({{"from", cc.from_side}, {"to", cc.to_side}, {"ratio", json_real(cc.ratio)},
                           {"increasing_separated", cc.increasing_separated},
                           {"superlinear_separated", cc.superlinear_separated}});
    r.summary = {{"task", "survival"}, {"config", config}, {"rows", rows}, {"contrasts", contrasts}};
    if (tab.loglog_fit)
      r.summary["loglog_slope"] = {{"slope", json_real(tab.loglog_fit->slope)},
                                   {"ci", interval_json(tab.loglog_slope_ci)}};
    r.table = std::move(t);
  } else {
    throw SpecError("--task must be exponent, field or survival");
  }
  return r;
}

// ---- check-conditions

json report_json(const ConditionReport& r) {
  return {{"name", r.name}, {"partial", json_real(r.partial)}, {"tail_bound", json_real(r.tail_bound)},
          {"verdict", to_string(r.verdict)}, {"witness", r.witness}};
}

Result do_conditions(const Common& c, std::uint64_t k_max, double tol, int n_max) {
  const auto spec = build_model(c.model);
  Result r;
  r.summary["model"] = model_json(c.model);
  json reports = json::array();
  if (const auto* lrp = std::get_if<LrpSpec>(&spec)) {
    const auto rep = lrp_condition_check(*lrp, k_max, tol);
    reports.push_back(report_json(rep.sparsity));
    reports.push_back(report_json(rep.first_moment));
    r.summary["has_certain_edge"] = rep.has_certain_edge;
    r.summary["hypothesis"] = to_string(rep.hypothesis);
    if (lrp->phi(1) >= 1.0) {
      const auto cp = lrp_cut_probability(*lrp, std::min<std::uint64_t>(k_max, 1u << 20));
      r.summary["cut_probability"] = {{"lo", json_real(cp.lo)}, {"hi", json_real(cp.hi)}, {"exact", cp.exact}};
    }
  } else if (const auto* w = std::get_if<WdrcmSpec>(&spec)) {
    const auto rep = wdrcm_cut_condition(*w, n_max, tol);
    reports.push_back(report_json(rep));
    r.summary["hypothesis"] = to_string(rep.verdict);
  } else if (const auto* gs = std::get_if<GilbertSpec>(&spec)) {
    ConditionReport rep;
    rep.name = "radius first moment";
    rep.partial = gs->radius.mean();
    rep.verdict = std::isfinite(rep.partial) ? Verdict::satisfied : Verdict::violated;
    if (!std::isfinite(rep.partial)) rep.witness = "Pareto tail with alpha <= 1";
    reports.push_back(report_json(rep));
    r.summary["hypothesis"] = to_string(rep.verdict);
  } else if (const auto* cc = std::get_if<CliqueChainSpec>(&spec)) {
    ConditionReport rep;
    rep.name = "clique size second moment";
    rep.verdict = cc->size.finite_second_moment() ? Verdict::satisfied : Verdict::violated;
    reports.push_back(report_json(rep));
    r.summary["hypothesis"] = to_string(rep.verdict);
  } else {
    ConditionReport rep;
    rep.name = "no one-dimensional condition for this model";
    reports.push_back(report_json(rep));
    r.summary["hypothesis"] = to_string(Verdict::inconclusive);
  }
  r.summary["reports"] = reports;
  return r;
}

// ---- output

void emit(const Result& r, const Common& c, const std::string& subcommand, const std::string& parameters,
          std::ostream& out) {
  std::string body;
  if (c.format == "json") {
    json j = r.summary;
    j["subcommand"] = subcommand;
    j["seed"] = c.seed;
    body = dump_json(j);
  } else if (c.format == "csv") {
    if (!r.table) throw SpecError(subcommand + " has no CSV output; use --format json");
    body = r.table->str();
  } else if (c.format == "edges") {
    if (!r.graph) throw SpecError(subcommand + " has no edge-list output");
    std::ostringstream s;
    write_edge_list(*r.graph, s, r.graph_comments);
    body = s.str();
  } else {
    throw SpecError("--format must be json, csv or edges");
  }
  if (c.out.empty()) {
    out << body;
    return;
  }
  write_file(c.out, body);
  json m = {{"subcommand", subcommand},
            {"tool", "cpphase"},
            {"version", CPPHASE_VERSION},
            {"rng", {{"name", std::string(kRngName)}, {"version", std::string(kRngVersion)}}},
            {"seed", c.seed},
            {"model", model_json(c.model)},
            {"parameters", parameters},
            {"timestamp", manifest_timestamp()},
            {"outputs", json::array({c.out})},
            {"format", c.format}};
  write_file(c.out + ".manifest.json", dump_json(m));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"contact process phase diagnostics on one-dimensional random graphs", "cpphase"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file with option values");
  app.set_version_flag("--version", std::string(CPPHASE_VERSION));

  Common c;
  double lambda = 1.0;
  std::optional<double> horizon;
  std::size_t replicas = 1000;
  std::size_t K = 1;
  std::optional<std::size_t> L;
  bool no_thin = false;
  std::uint64_t budget = 0;
  std::string box_text;

  auto* gen = app.add_subcommand("generate", "draw a graph and write its edge list");
  add_graph_options(gen, c);
  gen->add_option("--box", box_text, "lattice box side lengths, comma separated");

  auto* cuts = app.add_subcommand("cuts", "cut points, blocks and Kac statistics");
  add_graph_options(cuts, c);
  cuts->add_option("--K", K, "edges allowed across a cut link")->capture_default_str();
  cuts->add_option("--L", L, "(K,L)-cuts: crossing length at most L-1, thinned");
  cuts->add_flag("--no-thin", no_thin, "keep every (K,L)-cut");

  auto* sim = app.add_subcommand("simulate", "survival probability at one lambda");
  add_graph_options(sim, c);
  sim->add_option("--lambda", lambda)->required();
  sim->add_option("--horizon", horizon, "default: window/4");
  sim->add_option("--replicas", replicas)->capture_default_str();
  sim->add_option("--mode", c.mode, "quenched | annealed (required without --graph)");
  sim->add_option("--level", c.level)->capture_default_str();
  sim->add_option("--event-budget", budget, "per replica, 0: unlimited")->capture_default_str();

  std::string grid_text, windows_text, horizons_text, bracket_text;
  bool independent = false;
  double threshold = 0.05, precision = 0.25;
  auto* sweep = app.add_subcommand("sweep", "survival over a lambda grid and windows; optional lambda_c bracket");
  add_model_options(sweep, c);
  sweep->add_option("--lambda-grid", grid_text, "a,b,c or lo:hi:step");
  sweep->add_option("--window", windows_text, "window lengths, comma separated");
  sweep->add_option("--horizon", horizons_text, "one per window; default window/4");
  sweep->add_option("--replicas", replicas)->capture_default_str();
  sweep->add_option("--mode", c.mode, "quenched | annealed")->required();
  sweep->add_option("--margin", c.margin, "boundary margin");
  sweep->add_option("--level", c.level)->capture_default_str();
  sweep->add_option("--threshold", threshold)->capture_default_str();
  sweep->add_flag("--independent", independent, "fresh randomness for every lambda");
  sweep->add_option("--bracket", bracket_text, "lo,hi: also bisect for lambda_c");
  sweep->add_option("--precision", precision)->capture_default_str();
  sweep->add_option("--event-budget", budget, "per replica, 0: unlimited")->capture_default_str();

  std::string omega_mode = "extremal-eta";
  std::size_t max_blocks = 0;
  bool exclude_degenerate = false, cross_validate = false;
  auto* rw = app.add_subcommand("rwre", "block escape probabilities and the Ledrappier verdict");
  add_graph_options(rw, c);
  rw->add_option("--lambda", lambda)->required();
  rw->add_option("--replicas", replicas, "per distinct block")->capture_default_str();
  rw->add_option("--K", K)->capture_default_str();
  rw->add_option("--L", L);
  rw->add_option("--omega-mode", omega_mode, "extremal-eta | plain")->capture_default_str();
  rw->add_option("--max-blocks", max_blocks, "0: all")->capture_default_str();
  rw->add_flag("--exclude-degenerate", exclude_degenerate);
  rw->add_flag("--cross-validate", cross_validate);

  StarArgs sa;
  auto* star = app.add_subcommand("star", "star graph persistence and survival times");
  star->add_option("--task", sa.task, "persist | root | leaf | scaling")->capture_default_str();
  star->add_option("--leaves", sa.leaves)->capture_default_str();
  star->add_option("--k-grid", sa.k_grid, "leaf counts for --task scaling");
  star->add_option("--lambda", sa.lambda)->capture_default_str();
  star->add_option("--eps1", sa.eps1)->capture_default_str();
  star->add_option("--horizon", sa.horizon)->capture_default_str();
  star->add_option("--replicas", sa.replicas)->capture_default_str();
  star->add_option("--start", sa.start, "K-leaves-plus-root | K-leaves-only | root-only | all")
      ->capture_default_str();
  star->add_option("--quantile", sa.quantile)->capture_default_str();
  star->add_option("--event-budget", sa.budget)->capture_default_str();
  star->add_option("--level", c.level)->capture_default_str();

  RenormConfig rc;
  RenormArgs ra;
  auto* ren = app.add_subcommand("renorm", "good boxes, infection-path exponent, box survival");
  ren->add_option("--task", ra.task, "exponent | field | survival")->capture_default_str();
  ren->add_option("--dimension", c.model.dimension)->capture_default_str();
  ren->add_option("--gamma", c.model.gamma);
  ren->add_option("--eps", rc.eps)->capture_default_str();
  ren->add_option("--L", rc.L, "box volume")->capture_default_str();
  ren->add_option("--lambda", rc.lambda)->capture_default_str();
  ren->add_option("--c4", rc.c4)->capture_default_str();
  ren->add_option("--box", ra.box, "field: region sides; survival: box sides");
  ren->add_option("--window", c.window, "field: region side when --box is absent")->capture_default_str();
  ren->add_option("--horizon", ra.horizons, "survival: one per side, or one for all");
  ren->add_option("--replicas", ra.replicas)->capture_default_str();
  ren->add_option("--sub-box", ra.sub_box, "fraction of the side initially infected")->capture_default_str();
  ren->add_option("--event-budget", ra.budget)->capture_default_str();
  ren->add_option("--level", c.level)->capture_default_str();

  std::uint64_t k_max = 1u << 20;
  double tol = 1e-6;
  int n_max = 200;
  auto* chk = app.add_subcommand("check-conditions", "moment and cut conditions of the model");
  add_model_options(chk, c);
  chk->add_option("--k-max", k_max)->capture_default_str();
  chk->add_option("--tol", tol)->capture_default_str();
  chk->add_option("--n-max", n_max)->capture_default_str();

  for (auto* s : {gen, cuts, sim, sweep, rw, star, ren, chk}) add_io_options(s, c);

  std::vector<const char*> argv;
  argv.push_back("cpphase");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::validation);
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (c.format.empty()) c.format = sub == gen ? "edges" : "json";
    Result r;
    if (sub == gen) r = do_generate(c, box_text);
    else if (sub == cuts) r = do_cuts(c, K, L, no_thin);
    else if (sub == sim) r = do_simulate(c, lambda, horizon, replicas, budget);
    else if (sub == sweep)
      r = do_sweep(c, grid_text, windows_text, horizons_text, replicas, independent, threshold, bracket_text,
                   precision, budget);
    else if (sub == rw)
      r = do_rwre(c, lambda, replicas, K, L, omega_mode, max_blocks, exclude_degenerate, cross_validate);
    else if (sub == star) r = do_star(c, sa);
    else if (sub == ren) r = do_renorm(c, rc, ra);
    else r = do_conditions(c, k_max, tol, n_max);
    emit(r, c, name, sub->config_to_str(true, false), out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::failure);
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace cpphase::cli
