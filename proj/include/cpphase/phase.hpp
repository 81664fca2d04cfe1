#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpphase/contact.hpp"
#include "cpphase/models.hpp"
#include "cpphase/parallel.hpp"
#include "cpphase/stats.hpp"

namespace cpphase {

// quenched: one graph draw shared by all replicas; annealed: a fresh draw
// per replica.
enum class GraphMode { quenched, annealed };
std::string to_string(GraphMode m);

struct SurvivalOptions {
  GraphMode mode = GraphMode::annealed;
  double level = 0.95;
  // Censoring margin; nullopt means window/10. 0 turns censoring off.
  std::optional<std::size_t> margin;
  std::uint64_t event_budget = 0;  // per replica, 0: unlimited
  double arrow_cap = 0.0;          // shared-randomness sweeps set this to max lambda
  std::uint64_t graph_seed = 0;    // quenched mode draws the graph from this seed
  Execution execution = Execution::parallel;
};

// "Not extinct by the horizon" under two censoring conventions:
//  upper: a censored replica counts as surviving,
//  lower: a censored replica counts as extinct.
struct SurvivalEstimate {
  double lambda = 0.0;
  std::size_t window = 0;
  double horizon = 0.0;
  std::size_t replicas = 0;
  std::uint64_t extinct = 0;
  std::uint64_t alive = 0;
  std::uint64_t censored = 0;  // boundary or event budget
  stats::Proportion upper;
  stats::Proportion lower;
  std::vector<std::uint8_t> upper_indicator;  // per replica, for coupling checks
};

// Window of length n centred at 0 ([-(n/2), n-1-n/2]); the infection starts at 0.
Window centred_window(std::size_t n);

// Refuses fewer than 100 replicas.
SurvivalEstimate survival_probability(const ModelSpec& model, double lambda, std::size_t window, double horizon,
                                      std::size_t replicas, std::uint64_t seed, const SurvivalOptions& opts = {});
// Fixed graph (quenched by construction); the infection starts at the vertex
// closest to the window centre.
SurvivalEstimate survival_probability(const WindowedGraph& graph, double lambda, double horizon,
                                      std::size_t replicas, std::uint64_t seed, const SurvivalOptions& opts = {});

struct SweepResult {
  std::vector<double> lambdas;
  std::vector<std::size_t> windows;
  std::vector<double> horizons;
  // cells[w][l] for window index w and lambda index l
  std::vector<std::vector<SurvivalEstimate>> cells;
  std::vector<std::vector<double>> smoothed_upper;
  std::vector<std::vector<double>> smoothed_lower;
  double threshold = 0.05;
  // First lambda where the smoothed estimate reaches the threshold, by linear
  // interpolation; nullopt when the grid never reaches it.
  std::vector<std::optional<double>> crossing_upper;
  std::vector<std::optional<double>> crossing_lower;
  bool shared_randomness = true;
};

struct SweepOptions {
  SurvivalOptions survival;
  double threshold = 0.05;
  // Same graph draws and contact-process marks for every lambda, with the
  // arrow cap at max(lambda_grid): survival indicators are then monotone in
  // lambda replica by replica.
  bool shared_randomness = true;
};

// horizons: one per window, or empty for T = n/4.
SweepResult lambda_sweep(const ModelSpec& model, const std::vector<double>& lambda_grid,
                         const std::vector<std::size_t>& windows, const std::vector<double>& horizons,
                         std::size_t replicas, std::uint64_t seed, const SweepOptions& opts = {});

enum class ProbeClass { extinction_indicated, survival_indicated, ambiguous };
std::string to_string(ProbeClass c);

struct Probe {
  double lambda = 0.0;
  std::size_t window = 0;
  double horizon = 0.0;
  std::size_t replicas = 0;
  double upper = 0.0;
  double lower = 0.0;
  stats::Interval upper_ci;
  stats::Interval lower_ci;
  ProbeClass verdict = ProbeClass::ambiguous;
};

struct LambdaCOptions {
  SurvivalOptions survival;
  double threshold = 0.05;
  std::optional<double> horizon;  // default n/4
  std::size_t max_replica_factor = 4;  // ambiguous probes are retried with more replicas
  bool check_stability = true;
};

struct LambdaCResult {
  bool finite_detected = true;
  stats::Interval bracket;
  bool converged = false;        // width <= precision
  bool power_exhausted = false;  // stopped on an ambiguous probe
  bool stable = true;            // overlaps the bracket found with doubled window and horizon
  std::optional<stats::Interval> doubled_bracket;
  stats::Interval reported;      // bracket, widened to the hull of both when unstable
  std::vector<Probe> probes;
};

// Both tests use the upper convention, since reaching the boundary is the
// finite-window stand-in for survival:
// survival-indicated: CI lower bound above max(2 e^{-T}, threshold);
// extinction-indicated: CI upper bound below the threshold.
ProbeClass classify(const SurvivalEstimate& e, double threshold);

// Throws BracketError when the left end is not extinction-indicated or the
// right end is ambiguous. A right end that is extinction-indicated yields
// finite_detected = false.
LambdaCResult estimate_lambda_c(const ModelSpec& model, stats::Interval bracket, double precision,
                                std::size_t window, std::size_t replicas, std::uint64_t seed,
                                const LambdaCOptions& opts = {});

}  // namespace cpphase
