#include "cpphase/rwre.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cpphase/contact.hpp"
#include "cpphase/error.hpp"
#include "cpphase/rng.hpp"

namespace cpphase {

std::vector<std::int64_t> BlockProblem::key() const {
  std::vector<std::int64_t> k;
  k.push_back(static_cast<std::int64_t>(size));
  k.push_back(static_cast<std::int64_t>(feeders));
  auto in = internal;
  std::sort(in.begin(), in.end());
  k.push_back(static_cast<std::int64_t>(in.size()));
  for (auto [a, b] : in) {
    k.push_back(a);
    k.push_back(b);
  }
  auto ex = exits;
  std::sort(ex.begin(), ex.end());
  k.push_back(static_cast<std::int64_t>(ex.size()));
  for (auto x : ex) k.push_back(x);
  auto en = entries;
  std::sort(en.begin(), en.end());
  k.push_back(static_cast<std::int64_t>(en.size()));
  for (auto [f, x] : en) {
    k.push_back(f);
    k.push_back(x);
  }
  return k;
}

BlockProblem make_block_problem(const WindowedGraph& graph, Window block) {
  if (block.hi < block.lo || !graph.contains(block.lo) || !graph.contains(block.hi))
    throw DomainError("block outside the window");
  BlockProblem p;
  p.size = block.length();
  std::map<Vertex, std::uint32_t> feeder;
  for (Vertex v = block.lo; v <= block.hi; ++v) {
    const auto lv = static_cast<std::uint32_t>(v - block.lo);
    for (auto j : graph.neighbours_local(graph.local(v))) {
      const Vertex w = graph.global(j);
      if (w > block.hi) {
        p.exits.push_back(lv);
      } else if (w < block.lo) {
        // Feeders numbered right to left, so the nearest outside vertex is 0.
        feeder.emplace(w, 0);
      } else if (w > v) {
        p.internal.emplace_back(lv, static_cast<std::uint32_t>(w - block.lo));
      }
    }
  }
  std::uint32_t next = 0;
  for (auto it = feeder.rbegin(); it != feeder.rend(); ++it) it->second = next++;
  p.feeders = feeder.size();
  for (Vertex v = block.lo; v <= block.hi; ++v) {
    for (auto j : graph.neighbours_local(graph.local(v))) {
      const Vertex w = graph.global(j);
      if (w < block.lo) p.entries.emplace_back(feeder.at(w), static_cast<std::uint32_t>(v - block.lo));
    }
  }
  return p;
}

BlockProblem path_block(std::size_t size, std::size_t exits) {
  if (size == 0) throw DomainError("empty block");
  BlockProblem p;
  p.size = size;
  for (std::size_t i = 1; i < size; ++i)
    p.internal.emplace_back(static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(i));
  p.exits.assign(exits, static_cast<std::uint32_t>(size - 1));
  return p;
}

std::string to_string(OmegaMode m) { return m == OmegaMode::plain ? "plain" : "extremal_eta"; }

std::string to_string(RwreVerdict v) {
  switch (v) {
    case RwreVerdict::recurrent_indicated: return "recurrent_indicated";
    case RwreVerdict::transient_indicated: return "transient_indicated";
    case RwreVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

OmegaEstimate estimate_omega(const BlockProblem& block, double lambda, std::size_t replicas,
                             std::uint64_t seed, const OmegaOptions& opts) {
  if (replicas < 100) throw SpecError("estimate_omega needs at least 100 replicas");
  if (block.size == 0) throw DomainError("empty block");
  if (!(lambda >= 0.0)) throw SpecError("lambda must be >= 0");

  const bool eta = opts.mode == OmegaMode::extremal_eta;
  const std::size_t F = eta ? std::max<std::size_t>(block.feeders, 1) : 0;
  const std::size_t S = block.size;
  const std::size_t P = block.exits.size();
  std::vector<Edge> edges;
  for (auto [a, b] : block.internal) edges.push_back({static_cast<Vertex>(F + a), static_cast<Vertex>(F + b)});
  if (eta) {
    for (auto [f, x] : block.entries) edges.push_back({static_cast<Vertex>(f), static_cast<Vertex>(F + x)});
  }
  for (std::size_t k = 0; k < P; ++k)
    edges.push_back({static_cast<Vertex>(F + block.exits[k]), static_cast<Vertex>(F + S + k)});
  const WindowedGraph g(Window::of_length(F + S + P), std::move(edges), false);

  SimParams p;
  p.lambda = lambda;
  p.horizon = 1e9;
  p.variant = eta ? Variant::rightmost_eta : Variant::standard;
  for (std::size_t i = 0; i < F; ++i) p.permanent.push_back(static_cast<Vertex>(i));
  for (std::size_t i = 0; i < S; ++i) p.initial.push_back(static_cast<Vertex>(F + i));
  for (std::size_t k = 0; k < P; ++k) p.targets.push_back(static_cast<Vertex>(F + S + k));
  p.stop_on_extinction = true;
  p.event_budget = opts.event_budget;

  const auto fates = map_indices<Fate>(
      replicas, [&](std::size_t r) { return simulate(g, p, derive_stream(seed, "omega", r)).fate; },
      opts.execution);

  OmegaEstimate e;
  for (Fate f : fates) {
    if (f == Fate::target_hit) ++e.hits;
    else if (f != Fate::extinct) ++e.censored;
  }
  e.trials = replicas - e.censored;
  if (e.trials == 0) throw InsufficientData("every omega replica was censored");
  const double n = static_cast<double>(e.trials);
  e.omega = static_cast<double>(e.hits) / n;
  e.se = std::sqrt(e.omega * (1.0 - e.omega) / n);
  e.ci = stats::wilson(e.hits, e.trials, opts.level);
  e.degenerate = e.hits == 0 || e.hits == e.trials;
  e.clipped = std::clamp(e.omega, 0.5 / n, 1.0 - 0.5 / n);
  return e;
}

double omega_lower_bound(std::size_t block_size, std::size_t block_edges, double lambda, bool* warning) {
  if (block_size == 0) throw DomainError("block size must be positive");
  if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
  if (warning) *warning = lambda >= 1.0;
  return std::exp(-static_cast<double>(block_size) - 2.0 * lambda * static_cast<double>(block_edges));
}

namespace {

RwreVerdict verdict_for(double value, const stats::Interval& ci) {
  if (value == 0.0) return RwreVerdict::inconclusive;
  if (ci.lo > 0.0) return RwreVerdict::recurrent_indicated;
  if (ci.hi < 0.0) return RwreVerdict::transient_indicated;
  return RwreVerdict::inconclusive;
}

double log_ratio(double w) { return std::log((1.0 - w) / w); }

}  // namespace

LedrappierResult ledrappier_functional(std::span<const OmegaEstimate> estimates,
                                       std::span<const std::size_t> block_class,
                                       const LedrappierOptions& opts) {
  LedrappierResult r;
  std::vector<std::size_t> used;
  for (std::size_t c : block_class) {
    if (c >= estimates.size()) throw DomainError("block class out of range");
    if (estimates[c].degenerate) {
      ++r.degenerate;
      if (opts.exclude_degenerate) continue;
    }
    used.push_back(c);
  }
  if (used.empty()) throw InsufficientData("every block estimate is degenerate");
  if (used.size() < opts.min_blocks)
    throw InsufficientData("only " + std::to_string(used.size()) + " usable blocks, need " +
                           std::to_string(opts.min_blocks));
  r.blocks = used.size();

  double total = 0.0;
  for (auto c : used) total += log_ratio(estimates[c].clipped);
  r.value = total / static_cast<double>(used.size());

  // Two-level bootstrap: perturb each distinct estimate, then resample blocks.
  StreamRng rng(derive_stream(opts.seed, "ledrappier", 0));
  std::vector<double> reps(static_cast<std::size_t>(opts.bootstrap_reps));
  std::vector<double> perturbed(estimates.size());
  for (auto& out : reps) {
    for (std::size_t c = 0; c < estimates.size(); ++c) {
      const auto& e = estimates[c];
      const double n = static_cast<double>(std::max<std::uint64_t>(e.trials, 1));
      const double se = std::sqrt(e.clipped * (1.0 - e.clipped) / n);
      perturbed[c] = log_ratio(std::clamp(e.clipped + se * rng.normal(), 0.5 / n, 1.0 - 0.5 / n));
    }
    double s = 0.0;
    for (std::size_t k = 0; k < used.size(); ++k) s += perturbed[used[rng.below(used.size())]];
    out = s / static_cast<double>(used.size());
  }
  std::sort(reps.begin(), reps.end());
  const double alpha = (1.0 - opts.level) / 2.0;
  r.ci = {stats::quantile_sorted(reps, alpha), stats::quantile_sorted(reps, 1.0 - alpha)};
  r.verdict = verdict_for(r.value, r.ci);
  return r;
}

LedrappierResult ledrappier_functional(std::span<const double> omegas, const LedrappierOptions& opts) {
  if (omegas.size() < opts.min_blocks)
    throw InsufficientData("only " + std::to_string(omegas.size()) + " sites, need " +
                           std::to_string(opts.min_blocks));
  std::vector<double> values;
  values.reserve(omegas.size());
  for (double w : omegas) {
    if (!(w > 0.0 && w < 1.0)) throw DomainError("environment values must lie in (0,1)");
    values.push_back(log_ratio(w));
  }
  LedrappierResult r;
  r.blocks = values.size();
  r.value = stats::mean(values);
  r.ci = stats::bootstrap_ci(
      values, [](std::span<const double> xs) { return stats::mean(xs); }, opts.bootstrap_reps, opts.level,
      derive_stream(opts.seed, "ledrappier", 1));
  r.verdict = verdict_for(r.value, r.ci);
  return r;
}

WalkStats rwre_simulate(std::span<const double> omegas, std::uint64_t steps, std::uint64_t seed) {
  if (omegas.empty()) throw DomainError("empty environment");
  for (double w : omegas)
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("environment values must lie in [0,1]");
  StreamRng rng(derive_stream(seed, "rwre", 0));
  WalkStats s;
  s.steps = steps;
  std::int64_t x = 0;
  const auto m = static_cast<std::uint64_t>(omegas.size());
  for (std::uint64_t i = 0; i < steps; ++i) {
    if (x == 0) {
      x = 1;
    } else {
      const double w = omegas[static_cast<std::size_t>((static_cast<std::uint64_t>(x) - 1) % m)];
      x += rng.uniform() < w ? -1 : 1;
    }
    if (x == 0) ++s.returns;
    s.max_position = std::max(s.max_position, x);
  }
  s.final_position = x;
  return s;
}

PipelineReport pipeline_verdict(const WindowedGraph& graph, double lambda, std::size_t replicas,
                                std::uint64_t seed, const PipelineOptions& opts) {
  PipelineReport rep;
  rep.decomposition = block_decomposition(graph, opts.decomposition);
  const auto& dec = rep.decomposition;
  std::size_t nblocks = dec.blocks.size();
  if (opts.max_blocks != 0) nblocks = std::min(nblocks, opts.max_blocks);

  std::map<std::vector<std::int64_t>, std::size_t> classes;
  std::vector<BlockProblem> problems;
  std::vector<std::size_t> block_class;
  for (std::size_t k = 0; k < nblocks; ++k) {
    BlockProblem p = make_block_problem(graph, dec.blocks[k]);
    auto [it, inserted] = classes.emplace(p.key(), problems.size());
    if (inserted) problems.push_back(std::move(p));
    block_class.push_back(it->second);

    BlockEnvironment env;
    env.index = k;
    env.block = dec.blocks[k];
    env.size = dec.blocks[k].length();
    env.edges = dec.block_edges[k];
    env.exits = problems[it->second].exits.size();
    env.problem = it->second;
    env.lower_bound = omega_lower_bound(env.size, env.edges, lambda);
    rep.blocks.push_back(env);
  }

  rep.estimates.reserve(problems.size());
  for (std::size_t c = 0; c < problems.size(); ++c)
    rep.estimates.push_back(
        estimate_omega(problems[c], lambda, replicas, derive_stream(seed, "pipeline", c), opts.omega));

  for (auto& env : rep.blocks) {
    const auto& e = rep.estimates[env.problem];
    env.bound_ok = 1.0 - e.omega + 3.0 * e.se >= env.lower_bound;
    if (!env.bound_ok) ++rep.bound_violations;
  }

  LedrappierOptions lopts = opts.ledrappier;
  lopts.seed = derive_stream(seed, "pipeline-ledrappier", 0);
  rep.ledrappier = ledrappier_functional(rep.estimates, block_class, lopts);

  if (opts.cross_validate) {
    CrossValidation cv;
    const WindowedGraph half = induced_subgraph(graph, {dec.cut_points.front(), graph.hi()});
    std::vector<std::uint64_t> visits(nblocks, 0), ups(nblocks, 0);
    const auto walks = map_indices<BlockWalk>(
        opts.cv_runs,
        [&](std::size_t r) {
          const auto out = simulate_eta(half, lambda, opts.cv_horizon, derive_stream(seed, "pipeline-cv", r));
          return extract_block_process(out, dec);
        },
        opts.omega.execution);
    for (const auto& w : walks) {
      ++cv.runs;
      if (w.truncated) ++cv.truncated_runs;
      cv.long_steps += w.long_steps;
      cv.steps += w.up_steps + w.down_steps;
      // Only visits entered from above start with the block fully infected,
      // which is the configuration estimate_omega starts from.
      for (std::size_t n = 1; n + 1 < w.z.size(); ++n) {
        if (w.z[n - 1] < w.z[n]) continue;
        const auto b = static_cast<std::size_t>(w.z[n]);
        if (b >= nblocks) continue;
        ++visits[b];
        if (w.z[n + 1] > w.z[n]) ++ups[b];
      }
    }
    // Block 0 holds the permanent vertex, so the walk cannot step down from it.
    for (std::size_t k = 1; k < nblocks; ++k) {
      if (visits[k] < opts.cv_min_visits) continue;
      ++cv.blocks_compared;
      const auto emp = stats::wilson(ups[k], visits[k], 0.99);
      const auto& e = rep.estimates[block_class[k]];
      const auto est = stats::wilson(e.hits, e.trials, 0.99);
      if (emp.lo <= est.hi && est.lo <= emp.hi) ++cv.blocks_agreeing;
    }
    rep.cross_validation = cv;
  }
  return rep;
}

}  // namespace cpphase
