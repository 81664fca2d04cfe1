#include "cpphase/phase.hpp"

#include <algorithm>
#include <cmath>

#include "cpphase/error.hpp"
#include "cpphase/rng.hpp"

namespace cpphase {

std::string to_string(GraphMode m) { return m == GraphMode::quenched ? "quenched" : "annealed"; }

std::string to_string(ProbeClass c) {
  switch (c) {
    case ProbeClass::extinction_indicated: return "extinction_indicated";
    case ProbeClass::survival_indicated: return "survival_indicated";
    case ProbeClass::ambiguous: return "ambiguous";
  }
  return "ambiguous";
}

Window centred_window(std::size_t n) {
  const auto half = static_cast<Vertex>(n / 2);
  return {-half, static_cast<Vertex>(n) - 1 - half};
}

namespace {

SimParams survival_params(const WindowedGraph& g, double lambda, double horizon, const SurvivalOptions& opts,
                          Vertex start) {
  SimParams p;
  p.lambda = lambda;
  p.horizon = horizon;
  p.initial = {start};
  p.margin = opts.margin.value_or(g.size() / 10);
  p.event_budget = opts.event_budget;
  p.arrow_cap = opts.arrow_cap;
  return p;
}

SurvivalEstimate tally(const std::vector<Fate>& fates, double lambda, std::size_t window, double horizon,
                       double level) {
  SurvivalEstimate e;
  e.lambda = lambda;
  e.window = window;
  e.horizon = horizon;
  e.replicas = fates.size();
  e.upper_indicator.resize(fates.size());
  for (std::size_t i = 0; i < fates.size(); ++i) {
    const Fate f = fates[i];
    if (f == Fate::extinct) ++e.extinct;
    else if (f == Fate::alive_at_horizon) ++e.alive;
    else ++e.censored;
    e.upper_indicator[i] = f != Fate::extinct;
  }
  e.upper = stats::proportion(e.alive + e.censored, e.replicas, level);
  e.lower = stats::proportion(e.alive, e.replicas, level);
  return e;
}

void check_replicas(std::size_t replicas) {
  if (replicas < 100) throw SpecError("survival estimates need at least 100 replicas");
}

}  // namespace

SurvivalEstimate survival_probability(const ModelSpec& model, double lambda, std::size_t window, double horizon,
                                      std::size_t replicas, std::uint64_t seed, const SurvivalOptions& opts) {
  check_replicas(replicas);
  validate(model);
  const Window w = centred_window(window);
  std::optional<WindowedGraph> fixed;
  if (opts.mode == GraphMode::quenched) fixed = generate(model, w, opts.graph_seed);
  const auto fates = map_indices<Fate>(
      replicas,
      [&](std::size_t i) {
        const WindowedGraph g = fixed ? *fixed : generate(model, w, derive_stream(seed, "graph", i));
        const auto p = survival_params(g, lambda, horizon, opts, 0);
        return simulate(g, p, derive_stream(seed, "survival", i)).fate;
      },
      opts.execution);
  return tally(fates, lambda, window, horizon, opts.level);
}

SurvivalEstimate survival_probability(const WindowedGraph& graph, double lambda, double horizon,
                                      std::size_t replicas, std::uint64_t seed, const SurvivalOptions& opts) {
  check_replicas(replicas);
  const Vertex start = graph.lo() + static_cast<Vertex>((graph.size() - 1) / 2);
  const auto p = survival_params(graph, lambda, horizon, opts, start);
  const auto fates = map_indices<Fate>(
      replicas, [&](std::size_t i) { return simulate(graph, p, derive_stream(seed, "survival", i)).fate; },
      opts.execution);
  return tally(fates, lambda, graph.size(), horizon, opts.level);
}

namespace {

std::optional<double> crossing(const std::vector<double>& lambdas, const std::vector<double>& y, double threshold) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] >= threshold) {
      if (i == 0) return lambdas[0];
      const double t = (threshold - y[i - 1]) / (y[i] - y[i - 1]);
      return lambdas[i - 1] + t * (lambdas[i] - lambdas[i - 1]);
    }
  }
  return std::nullopt;
}

}  // namespace

SweepResult lambda_sweep(const ModelSpec& model, const std::vector<double>& grid,
                         const std::vector<std::size_t>& windows, const std::vector<double>& horizons,
                         std::size_t replicas, std::uint64_t seed, const SweepOptions& opts) {
  if (grid.empty() || windows.empty()) throw SpecError("sweep needs a lambda grid and at least one window");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw SpecError("lambda grid must be increasing");
  for (std::size_t i = 1; i < windows.size(); ++i)
    if (!(windows[i] > windows[i - 1])) throw SpecError("windows must be increasing");
  if (!horizons.empty() && horizons.size() != windows.size())
    throw SpecError("give one horizon per window or none");

  SweepResult r;
  r.lambdas = grid;
  r.windows = windows;
  r.threshold = opts.threshold;
  r.shared_randomness = opts.shared_randomness;
  for (std::size_t w = 0; w < windows.size(); ++w)
    r.horizons.push_back(horizons.empty() ? static_cast<double>(windows[w]) / 4.0 : horizons[w]);

  SurvivalOptions so = opts.survival;
  if (opts.shared_randomness) so.arrow_cap = std::max(so.arrow_cap, grid.back());
  r.cells.resize(windows.size());
  for (std::size_t w = 0; w < windows.size(); ++w) {
    for (std::size_t l = 0; l < grid.size(); ++l) {
      const std::uint64_t s =
          opts.shared_randomness ? derive_stream(seed, "sweep", w) : derive_stream(derive_stream(seed, "sweep", w), l);
      r.cells[w].push_back(survival_probability(model, grid[l], windows[w], r.horizons[w], replicas, s, so));
    }
    std::vector<double> up, lo, wt;
    for (const auto& c : r.cells[w]) {
      up.push_back(c.upper.estimate);
      lo.push_back(c.lower.estimate);
      wt.push_back(static_cast<double>(c.replicas));
    }
    r.smoothed_upper.push_back(stats::isotonic_increasing(up, wt));
    r.smoothed_lower.push_back(stats::isotonic_increasing(lo, wt));
    r.crossing_upper.push_back(crossing(grid, r.smoothed_upper.back(), opts.threshold));
    r.crossing_lower.push_back(crossing(grid, r.smoothed_lower.back(), opts.threshold));
  }
  return r;
}

ProbeClass classify(const SurvivalEstimate& e, double threshold) {
  const double floor = std::max(2.0 * std::exp(-e.horizon), threshold);
  if (e.upper.ci.lo > floor) return ProbeClass::survival_indicated;
  if (e.upper.ci.hi < threshold) return ProbeClass::extinction_indicated;
  return ProbeClass::ambiguous;
}

namespace {

struct Bisection {
  stats::Interval bracket;
  bool finite = true;
  bool converged = false;
  bool exhausted = false;
};

Bisection bisect(const ModelSpec& model, stats::Interval start, double precision, std::size_t window, double horizon,
                 std::size_t replicas, std::uint64_t seed, const LambdaCOptions& opts, std::vector<Probe>& log) {
  std::size_t probe_index = 0;
  auto probe = [&](double lambda) {
    std::size_t reps = replicas;
    ProbeClass c = ProbeClass::ambiguous;
    while (true) {
      const auto e = survival_probability(model, lambda, window, horizon, reps,
                                          derive_stream(seed, "lambda-c", probe_index), opts.survival);
      c = classify(e, opts.threshold);
      log.push_back({lambda, window, horizon, reps, e.upper.estimate, e.lower.estimate, e.upper.ci, e.lower.ci, c});
      if (c != ProbeClass::ambiguous || reps >= replicas * opts.max_replica_factor) break;
      reps *= 2;
    }
    ++probe_index;
    return c;
  };

  Bisection b;
  b.bracket = start;
  const ProbeClass left = probe(start.lo);
  if (left != ProbeClass::extinction_indicated)
    throw BracketError("left end lambda=" + std::to_string(start.lo) + " is " + to_string(left) +
                       ", expected extinction_indicated");
  const ProbeClass right = probe(start.hi);
  if (right == ProbeClass::extinction_indicated) {
    b.finite = false;
    return b;
  }
  if (right != ProbeClass::survival_indicated)
    throw BracketError("right end lambda=" + std::to_string(start.hi) + " is ambiguous");
  while (b.bracket.width() > precision) {
    const double mid = 0.5 * (b.bracket.lo + b.bracket.hi);
    const ProbeClass c = probe(mid);
    if (c == ProbeClass::extinction_indicated) b.bracket.lo = mid;
    else if (c == ProbeClass::survival_indicated) b.bracket.hi = mid;
    else {
      b.exhausted = true;
      break;
    }
  }
  b.converged = b.bracket.width() <= precision;
  return b;
}

}  // namespace

LambdaCResult estimate_lambda_c(const ModelSpec& model, stats::Interval bracket, double precision,
                                std::size_t window, std::size_t replicas, std::uint64_t seed,
                                const LambdaCOptions& opts) {
  if (!(bracket.lo >= 0.0 && bracket.hi > bracket.lo)) throw BracketError("bracket must satisfy 0 <= lo < hi");
  if (!(precision > 0.0)) throw SpecError("precision must be positive");
  const double horizon = opts.horizon.value_or(static_cast<double>(window) / 4.0);
  LambdaCResult r;
  const auto b = bisect(model, bracket, precision, window, horizon, replicas, seed, opts, r.probes);
  r.finite_detected = b.finite;
  r.bracket = b.bracket;
  r.reported = b.bracket;
  r.converged = b.converged;
  r.power_exhausted = b.exhausted;
  if (!b.finite || !opts.check_stability) return r;

  LambdaCOptions doubled = opts;
  const auto b2 = bisect(model, bracket, precision, 2 * window, 2.0 * horizon, replicas,
                         derive_stream(seed, "lambda-c-doubled", 0), doubled, r.probes);
  if (!b2.finite) {
    r.stable = false;
    r.reported = bracket;
    return r;
  }
  r.doubled_bracket = b2.bracket;
  r.stable = b.bracket.lo <= b2.bracket.hi && b2.bracket.lo <= b.bracket.hi;
  if (!r.stable)
    r.reported = {std::min(b.bracket.lo, b2.bracket.lo), std::max(b.bracket.hi, b2.bracket.hi)};
  return r;
}

}  // namespace cpphase
