#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cpphase/parallel.hpp"
#include "cpphase/stats.hpp"

namespace cpphase {

// K = ceil(k lambda / (1 + 2 lambda)). DomainError unless k >= 1, lambda > 0.
std::size_t star_threshold(std::size_t k, double lambda);

enum class StarStart { K_leaves_plus_root, K_leaves_only, root_only, all };
std::string to_string(StarStart s);

struct StarConfig {
  std::size_t k = 100;
  double lambda = 0.5;
  StarStart initial = StarStart::K_leaves_plus_root;
  double eps1 = 0.1;
  double horizon = 100.0;
  std::size_t replicas = 1000;
  std::uint64_t seed = 0;
  double level = 0.99;
  // Refuse runs whose expected event count (k+1)(1+lambda) T * replicas
  // exceeds this.
  double event_budget = 5e9;
  Execution execution = Execution::parallel;
};

// State of the star S_k aggregated to (root infected?, number of infected
// leaves). Rates: root recovers at 1, each infected leaf at 1, the root is
// infected at lambda * leaves when susceptible, and an infected root infects
// each susceptible leaf at rate lambda.
struct StarRun {
  double extinction_time = std::numeric_limits<double>::infinity();  // inf: alive at the horizon
  std::size_t min_count = 0;  // min |xi_t| over [window_start, horizon]
  std::uint64_t events = 0;
  std::uint64_t leaf_recoveries_before_root = 0;
  bool root_infected = false;  // root infected at some time > 0 (or initially)
};

// stop_at_root ends the run at the first infection of the root.
StarRun simulate_star(std::size_t k, double lambda, bool root, std::size_t leaves, double horizon,
                      double window_start, std::uint64_t seed, bool stop_at_root = false);

// Number of infected sites required by the persistence event: ceil(eps1 K),
// at least 1.
std::size_t persistence_floor(double eps1, std::size_t K);

struct PersistEstimate {
  std::size_t K = 0;
  std::size_t floor = 0;
  double window_start = 0.0;
  stats::Proportion prob;
  double mean_events = 0.0;
};

// P(inf_{t <= T} |xi_t| >= eps1 K) from the configured start (default: K
// leaves and the root).
PersistEstimate star_persist_from_K(const StarConfig& config);
// P(inf_{k^{2/3} <= t <= T} |xi_t| >= eps1 K) from the root alone.
PersistEstimate star_persist_from_root(const StarConfig& config);

// Leaf recoveries before the first infection of the root, starting from K
// infected leaves and a susceptible root. Each step is a race won by the
// root with probability lambda/(1+lambda), so the count is geometric with
// parameter q = 1/(1+lambda), truncated at K: mean q(1 - q^K)/(1 - q).
double expected_leaf_recoveries(std::size_t K, double lambda);
std::vector<double> sample_leaf_recoveries(std::size_t k, std::size_t K, double lambda,
                                           std::size_t replicas, std::uint64_t seed);

struct ScalingRow {
  std::size_t k = 0;
  std::size_t K = 0;
  double quantile = 0.0;  // +inf when censored
  stats::Interval ci;
  std::size_t censored = 0;  // replicas alive at the horizon
  bool quantile_censored = false;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  stats::LinearFit fit;  // log(quantile) against k over uncensored rows
  stats::Interval slope_ci;
  std::size_t fitted_rows = 0;
};

struct ScalingOptions {
  StarStart initial = StarStart::K_leaves_plus_root;
  double horizon = 1e6;
  double level = 0.99;
  double event_budget = 5e9;
  Execution execution = Execution::parallel;
};

ScalingTable star_survival_time_scaling(const std::vector<std::size_t>& k_grid, double lambda, double quantile,
                                        std::size_t replicas, std::uint64_t seed,
                                        const ScalingOptions& opts = {});

}  // namespace cpphase
