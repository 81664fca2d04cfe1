#include "cpphase/star.hpp"

#include <algorithm>
#include <cmath>

#include "cpphase/error.hpp"
#include "cpphase/rng.hpp"

namespace cpphase {

std::size_t star_threshold(std::size_t k, double lambda) {
  if (k < 1) throw DomainError("star needs at least one leaf");
  if (!(lambda > 0.0)) throw DomainError("star threshold needs lambda > 0");
  const double x = static_cast<double>(k) * lambda / (1.0 + 2.0 * lambda);
  return static_cast<std::size_t>(std::max(1.0, std::ceil(x)));
}

std::string to_string(StarStart s) {
  switch (s) {
    case StarStart::K_leaves_plus_root: return "K_leaves_plus_root";
    case StarStart::K_leaves_only: return "K_leaves_only";
    case StarStart::root_only: return "root_only";
    case StarStart::all: return "all";
  }
  return "unknown";
}

StarRun simulate_star(std::size_t k, double lambda, bool root, std::size_t leaves, double horizon,
                      double window_start, std::uint64_t seed, bool stop_at_root) {
  if (leaves > k) throw DomainError("more infected leaves than leaves");
  StreamRng rng(seed);
  StarRun out;
  out.root_infected = root;
  std::size_t j = leaves;
  int r = root ? 1 : 0;
  double t = 0.0;
  std::size_t min_count = std::numeric_limits<std::size_t>::max();
  const auto kk = static_cast<double>(k);
  while (true) {
    const std::size_t count = j + static_cast<std::size_t>(r);
    const double rec_root = r;
    const double rec_leaves = static_cast<double>(j);
    const double inf_root = r ? 0.0 : lambda * static_cast<double>(j);
    const double inf_leaves = r ? lambda * (kk - static_cast<double>(j)) : 0.0;
    const double total = rec_root + rec_leaves + inf_root + inf_leaves;
    if (total <= 0.0) {
      out.extinction_time = t;
      min_count = 0;
      break;
    }
    const double dt = rng.exponential(total);
    // The state `count` holds on [t, t + dt).
    if (t + dt > window_start) min_count = std::min(min_count, count);
    if (t + dt > horizon) break;
    t += dt;
    ++out.events;
    double u = rng.uniform() * total;
    if ((u -= rec_root) < 0.0) {
      r = 0;
    } else if ((u -= rec_leaves) < 0.0) {
      --j;
      if (!out.root_infected) ++out.leaf_recoveries_before_root;
    } else if ((u -= inf_root) < 0.0) {
      r = 1;
      out.root_infected = true;
      if (stop_at_root) break;
    } else {
      ++j;
    }
  }
  out.min_count = min_count == std::numeric_limits<std::size_t>::max() ? 0 : min_count;
  return out;
}

std::size_t persistence_floor(double eps1, std::size_t K) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(eps1 * static_cast<double>(K) - 1e-12)));
}

namespace {

void check_config(const StarConfig& c) {
  if (!(c.eps1 > 0.0 && c.eps1 < 1.0)) throw SpecError("eps1 must lie in (0,1)");
  if (!(c.horizon > 0.0)) throw SpecError("horizon must be positive");
  if (!(c.lambda >= 0.0)) throw SpecError("lambda must be >= 0");
  if (c.replicas == 0) throw SpecError("replicas must be positive");
  const double required =
      static_cast<double>(c.k + 1) * (1.0 + c.lambda) * c.horizon * static_cast<double>(c.replicas);
  if (required > c.event_budget)
    throw BudgetExceeded("star experiment needs about " + std::to_string(required) +
                             " events, budget is " + std::to_string(c.event_budget),
                         required);
}

std::size_t threshold_or_zero(std::size_t k, double lambda) {
  return (k >= 1 && lambda > 0.0) ? star_threshold(k, lambda) : 0;
}

PersistEstimate persist(const StarConfig& c, bool root, std::size_t leaves, double window_start,
                        std::string_view tag) {
  check_config(c);
  PersistEstimate e;
  e.K = threshold_or_zero(c.k, c.lambda);
  e.floor = persistence_floor(c.eps1, e.K);
  e.window_start = window_start;
  if (window_start > c.horizon) throw SpecError("persistence window starts after the horizon");
  const auto runs = map_indices<StarRun>(
      c.replicas,
      [&](std::size_t i) {
        return simulate_star(c.k, c.lambda, root, leaves, c.horizon, window_start, derive_stream(c.seed, tag, i));
      },
      c.execution);
  std::uint64_t ok = 0;
  double events = 0.0;
  for (const auto& r : runs) {
    if (r.min_count >= e.floor) ++ok;
    events += static_cast<double>(r.events);
  }
  e.prob = stats::proportion(ok, c.replicas, c.level);
  e.mean_events = events / static_cast<double>(c.replicas);
  return e;
}

}  // namespace

PersistEstimate star_persist_from_K(const StarConfig& c) {
  const std::size_t K = threshold_or_zero(c.k, c.lambda);
  bool root = true;
  std::size_t leaves = K;
  switch (c.initial) {
    case StarStart::K_leaves_plus_root: break;
    case StarStart::K_leaves_only: root = false; break;
    case StarStart::root_only: leaves = 0; break;
    case StarStart::all: leaves = c.k; break;
  }
  return persist(c, root, std::min(leaves, c.k), 0.0, "star-K");
}

PersistEstimate star_persist_from_root(const StarConfig& c) {
  const double start = std::pow(static_cast<double>(c.k), 2.0 / 3.0);
  return persist(c, true, 0, start, "star-root");
}

double expected_leaf_recoveries(std::size_t K, double lambda) {
  if (!(lambda > 0.0)) return static_cast<double>(K);
  const double q = 1.0 / (1.0 + lambda);
  return q * (1.0 - std::pow(q, static_cast<double>(K))) / (1.0 - q);
}

std::vector<double> sample_leaf_recoveries(std::size_t k, std::size_t K, double lambda, std::size_t replicas,
                                           std::uint64_t seed) {
  return map_indices<double>(replicas, [&](std::size_t i) {
    // Stops at the first root infection or at extinction.
    const auto r = simulate_star(k, lambda, false, K, 1e9, 0.0, derive_stream(seed, "star-leaf", i), true);
    return static_cast<double>(r.leaf_recoveries_before_root);
  });
}

ScalingTable star_survival_time_scaling(const std::vector<std::size_t>& k_grid, double lambda, double quantile,
                                        std::size_t replicas, std::uint64_t seed, const ScalingOptions& opts) {
  if (k_grid.empty()) throw SpecError("empty k grid");
  for (std::size_t i = 1; i < k_grid.size(); ++i)
    if (k_grid[i] <= k_grid[i - 1]) throw SpecError("k grid must be increasing");
  if (!(quantile > 0.0 && quantile < 1.0)) throw SpecError("quantile must lie in (0,1)");
  ScalingTable table;
  std::vector<double> xs, ys;
  for (std::size_t idx = 0; idx < k_grid.size(); ++idx) {
    const std::size_t k = k_grid[idx];
    ScalingRow row;
    row.k = k;
    row.K = threshold_or_zero(k, lambda);
    const double required = static_cast<double>(k + 1) * (1.0 + lambda) * opts.horizon * static_cast<double>(replicas);
    if (required > opts.event_budget)
      throw BudgetExceeded("scaling run at k=" + std::to_string(k) + " needs about " + std::to_string(required) +
                               " events",
                           required);
    bool root = true;
    std::size_t leaves = row.K;
    if (opts.initial == StarStart::all) leaves = k;
    else if (opts.initial == StarStart::root_only) leaves = 0;
    else if (opts.initial == StarStart::K_leaves_only) root = false;
    const auto times = map_indices<double>(
        replicas,
        [&](std::size_t i) {
          return simulate_star(k, lambda, root, leaves, opts.horizon, 0.0,
                               derive_stream(derive_stream(seed, "star-scaling", idx), i))
              .extinction_time;
        },
        opts.execution);
    for (double t : times)
      if (std::isinf(t)) ++row.censored;
    std::vector<double> sorted(times);
    std::sort(sorted.begin(), sorted.end());
    row.quantile = stats::quantile_sorted(sorted, quantile);
    row.quantile_censored = std::isinf(row.quantile);
    row.ci = stats::quantile_ci(times, quantile, opts.level);
    if (!row.quantile_censored && row.quantile > 0.0) {
      xs.push_back(static_cast<double>(k));
      ys.push_back(std::log(row.quantile));
    }
    table.rows.push_back(row);
  }
  table.fitted_rows = xs.size();
  if (xs.size() >= 2) {
    table.fit = stats::least_squares(xs, ys);
    const double z = stats::z_for_level(opts.level);
    table.slope_ci = {table.fit.slope - z * table.fit.slope_se, table.fit.slope + z * table.fit.slope_se};
  }
  return table;
}

}  // namespace cpphase
