#include "cpphase/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpphase/error.hpp"
#include "cpphase/models.hpp"
#include "cpphase/rng.hpp"

namespace cpphase {

std::optional<int> box_side(std::size_t L, int d) {
  if (d < 1 || L == 0) return std::nullopt;
  const auto guess = static_cast<long long>(std::llround(std::pow(static_cast<double>(L), 1.0 / d)));
  for (long long s = std::max(1LL, guess - 1); s <= guess + 1; ++s) {
    unsigned long long v = 1;
    for (int k = 0; k < d; ++k) v *= static_cast<unsigned long long>(s);
    if (v == L) return static_cast<int>(s);
  }
  return std::nullopt;
}

void validate(const RenormConfig& c) {
  if (c.dimension < 2) throw SpecError("renormalisation needs d >= 2");
  if (!(c.gamma > 0.0 && c.gamma < 1.0)) throw SpecError("gamma must lie in (0,1)");
  if (!(c.eps > 0.0)) throw SpecError("eps must be positive");
  if (!box_side(c.L, c.dimension)) throw SpecError("L must be a d-th power of an integer");
  if (!(c.lambda >= 0.0) || !std::isfinite(c.lambda)) throw SpecError("lambda must be finite and >= 0");
  if (!(c.c4 > 0.0)) throw SpecError("c4 must be positive");
}

GoodBoxField good_box_field(const LatticeGraph& graph, std::size_t L, double gamma, double eps, double level,
                            Execution ex) {
  const int d = graph.dimension();
  const auto side = box_side(L, d);
  if (!side) throw SpecError("L must be a d-th power of an integer");
  const auto& dims = graph.dims();
  GoodBoxField f;
  f.L = L;
  f.side = *side;
  f.threshold = std::pow(static_cast<double>(L), gamma - eps);
  std::size_t nboxes = 1;
  for (int n : dims) {
    if (n < *side) throw SpecError("region is smaller than one box");
    if (n % *side != 0) throw SpecError("box side does not divide the region");
    f.boxes_per_dim.push_back(n / *side);
    nboxes *= static_cast<std::size_t>(n / *side);
  }
  const auto adj = graph.adjacency();
  // Box index of a site, in the same row-major order as the boxes.
  auto box_of = [&](std::size_t site) {
    std::size_t b = 0, mult = 1;
    for (std::size_t k = dims.size(); k-- > 0;) {
      const auto n = static_cast<std::size_t>(dims[k]);
      b += static_cast<std::size_t>(static_cast<int>(site % n) / *side) * mult;
      mult *= static_cast<std::size_t>(f.boxes_per_dim[k]);
      site /= n;
    }
    return b;
  };
  f.boxes = map_indices<GoodBox>(
      nboxes,
      [&](std::size_t b) {
        GoodBox box;
        box.corner.resize(dims.size());
        std::size_t rem = b;
        for (std::size_t k = dims.size(); k-- > 0;) {
          box.corner[k] = static_cast<int>(rem % static_cast<std::size_t>(f.boxes_per_dim[k])) * *side;
          rem /= static_cast<std::size_t>(f.boxes_per_dim[k]);
        }
        std::vector<int> off(dims.size(), 0), c(dims.size());
        while (true) {
          for (std::size_t k = 0; k < dims.size(); ++k) c[k] = box.corner[k] + off[k];
          const std::size_t s = graph.site(c);
          std::size_t deg = 0;
          for (auto t : adj.neighbours(s))
            if (box_of(t) == b) ++deg;
          if (deg > box.max_degree || (deg == box.max_degree && box.max_degree == 0)) {
            box.max_degree = deg;
            box.argmax_site = s;
          }
          std::size_t k = dims.size();
          while (k-- > 0) {
            if (++off[k] < *side) break;
            off[k] = 0;
          }
          if (k == static_cast<std::size_t>(-1)) break;
        }
        box.good = static_cast<double>(box.max_degree) >= f.threshold;
        return box;
      },
      ex);
  std::uint64_t good = 0;
  for (const auto& b : f.boxes) good += b.good;
  f.good_fraction = stats::proportion(good, f.boxes.size(), level);
  return f;
}

PathExponent infection_path_exponent(double L, int d, double gamma, double eps, double lambda, double c4) {
  if (d < 1 || !(L > 0.0)) throw DomainError("infection path exponent needs L > 0 and d >= 1");
  const double a = gamma - eps;
  const double b = 1.0 / d;
  const double lg = std::isinf(lambda) ? 0.0 : std::log((1.0 + lambda) / lambda);
  const double A = std::pow(2.0, 1.0 + b) * lg;
  auto value = [&](double l) { return c4 * std::pow(l, a) - A * std::pow(l, b); };

  PathExponent r;
  r.value = value(L);
  r.positive = r.value > 0.0;
  // In terms of the box side m, value/m = c4 m^{d(a-b)} - A changes sign at
  // most once.
  if (A <= 0.0) {
    r.eventually_positive = true;
    r.minimal_L = 1.0;
    return r;
  }
  if (a < b || (a == b && c4 <= A) || !std::isfinite(A)) return r;
  r.eventually_positive = true;
  auto positive_at = [&](double m) { return value(std::pow(m, d)) > 0.0; };
  double hi = 1.0;
  while (!positive_at(hi)) {
    hi *= 2.0;
    if (hi > 1e300) return r;
  }
  double lo = hi / 2.0;
  if (hi == 1.0) {
    r.minimal_L = 1.0;
    return r;
  }
  // smallest integer m in (lo, hi] with a positive value
  auto lo_i = static_cast<long double>(std::floor(lo));
  auto hi_i = static_cast<long double>(hi);
  while (hi_i - lo_i > 1) {
    const long double mid = std::floor((lo_i + hi_i) / 2);
    if (positive_at(static_cast<double>(mid))) hi_i = mid;
    else lo_i = mid;
  }
  r.minimal_L = std::pow(static_cast<double>(hi_i), d);
  return r;
}

WindowedGraph lattice_as_windowed(const LatticeGraph& graph) {
  std::vector<Edge> edges;
  edges.reserve(graph.edge_count());
  const auto adj = graph.adjacency();
  for (std::size_t s = 0; s < graph.site_count(); ++s)
    for (auto t : adj.neighbours(s))
      if (t > s) edges.push_back({static_cast<Vertex>(s), static_cast<Vertex>(t)});
  return WindowedGraph(Window::of_length(graph.site_count()), std::move(edges), false);
}

std::vector<Vertex> central_sub_box(const std::vector<int>& dims, int sub_side) {
  std::vector<int> lo(dims.size()), len(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    len[k] = std::clamp(sub_side, 1, dims[k]);
    lo[k] = (dims[k] - len[k]) / 2;
  }
  std::vector<Vertex> out;
  std::vector<int> off(dims.size(), 0);
  while (true) {
    std::size_t s = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) s = s * static_cast<std::size_t>(dims[k]) + static_cast<std::size_t>(lo[k] + off[k]);
    out.push_back(static_cast<Vertex>(s));
    std::size_t k = dims.size();
    while (k-- > 0) {
      if (++off[k] < len[k]) break;
      off[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

double box_extinction_time(const LatticeGraph& graph, double lambda, double horizon, double sub_box_fraction,
                           std::uint64_t seed, const BoxSurvivalOptions& opts, Fate* fate, std::uint64_t* events) {
  const WindowedGraph g = lattice_as_windowed(graph);
  const int side = *std::min_element(graph.dims().begin(), graph.dims().end());
  SimParams p;
  p.lambda = lambda;
  p.horizon = horizon;
  p.initial = central_sub_box(graph.dims(), std::max(1, static_cast<int>(std::lround(sub_box_fraction * side))));
  p.event_budget = opts.event_budget;
  p.arrows = opts.arrows;
  p.arrow_cap = opts.arrow_cap;
  const auto out = simulate(g, p, seed);
  if (fate) *fate = out.fate;
  if (events) *events = out.events;
  return out.fate == Fate::extinct ? out.time : std::numeric_limits<double>::infinity();
}

SurvivalTable box_survival_experiment(const RenormConfig& config, const std::vector<int>& sides,
                                      const std::vector<double>& horizons, std::size_t replicas,
                                      std::uint64_t seed, const BoxSurvivalOptions& opts) {
  validate(config);
  if (sides.empty()) throw SpecError("no box sides given");
  if (horizons.size() != sides.size()) throw SpecError("give one horizon per box side");
  for (std::size_t i = 1; i < sides.size(); ++i)
    if (sides[i] <= sides[i - 1]) throw SpecError("box sides must be increasing");
  if (replicas < 10) throw SpecError("box survival needs at least 10 replicas");
  if (!(opts.sub_box_fraction > 0.0 && opts.sub_box_fraction <= 1.0))
    throw SpecError("sub-box fraction must lie in (0,1]");

  SurvivalTable table;
  table.config = config;
  BooleanLatticeSpec spec{config.dimension, config.gamma};
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (sides[i] < 1) throw SpecError("box side must be positive");
    SurvivalRow row;
    row.side = sides[i];
    row.horizon = horizons[i];
    row.replicas = replicas;
    const std::vector<int> box(static_cast<std::size_t>(config.dimension), sides[i]);
    row.initial_size = central_sub_box(box, std::max(1, static_cast<int>(std::lround(opts.sub_box_fraction * sides[i]))))
                           .size();
    struct Run {
      double time;
      Fate fate;
      std::uint64_t events;
    };
    const std::uint64_t side_seed = derive_stream(seed, "renorm-side", static_cast<std::uint64_t>(sides[i]));
    const auto runs = map_indices<Run>(
        replicas,
        [&](std::size_t r) {
          const auto g = boolean_lattice_generate(spec, box, derive_stream(side_seed, "renorm-graph", r));
          Run run{};
          run.time = box_extinction_time(g, config.lambda, row.horizon, opts.sub_box_fraction,
                                         derive_stream(side_seed, "renorm-cp", r), opts, &run.fate, &run.events);
          return run;
        },
        opts.execution);
    double ev = 0.0;
    for (const auto& r : runs) {
      row.times.push_back(r.time);
      if (r.fate == Fate::budget_exhausted) ++row.budget_exhausted;
      else if (r.fate != Fate::extinct) ++row.censored;
      ev += static_cast<double>(r.events);
    }
    row.mean_events = ev / static_cast<double>(replicas);
    std::vector<double> sorted = row.times;
    std::sort(sorted.begin(), sorted.end());
    row.median = stats::quantile_sorted(sorted, 0.5);
    row.median_ci = stats::quantile_ci(row.times, 0.5, opts.level);
    if (std::isfinite(row.median) && row.median > 0.0) {
      xs.push_back(std::log(static_cast<double>(row.side)));
      ys.push_back(std::log(row.median));
    }
    table.rows.push_back(std::move(row));
  }
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& a = table.rows[i - 1];
    const auto& b = table.rows[i];
    SurvivalContrast c;
    c.from_side = a.side;
    c.to_side = b.side;
    c.increasing_separated = b.median_ci.lo > a.median_ci.hi;
    c.superlinear_separated =
        b.median_ci.lo > static_cast<double>(b.side) / static_cast<double>(a.side) * a.median_ci.hi;
    c.ratio = b.median / a.median;
    table.contrasts.push_back(c);
  }
  if (xs.size() >= 2) {
    table.loglog_fit = stats::least_squares(xs, ys);
    const double z = stats::z_for_level(opts.level);
    table.loglog_slope_ci = {table.loglog_fit->slope - z * table.loglog_fit->slope_se,
                             table.loglog_fit->slope + z * table.loglog_fit->slope_se};
  }
  return table;
}

}  // namespace cpphase
