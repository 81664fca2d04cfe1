#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cpphase/contact.hpp"
#include "cpphase/graph.hpp"
#include "cpphase/parallel.hpp"
#include "cpphase/stats.hpp"

namespace cpphase {

struct RenormConfig {
  int dimension = 2;
  double gamma = 0.75;
  double eps = 0.1;
  std::size_t L = 10000;  // box volume, a d-th power
  double lambda = 0.05;
  double c4 = 1.0;
  // Reported only; nothing is tuned from them.
  double eps1 = 0.1;
  double eps2 = 0.05;
  double p = 0.0;
  double q = 0.0;
};

// Throws SpecError when d < 2, gamma outside (0,1), eps <= 0, L not a d-th
// power, lambda < 0 or c4 <= 0.
void validate(const RenormConfig& c);

// Integer s with s^d = L, or nullopt.
std::optional<int> box_side(std::size_t L, int d);

struct GoodBox {
  std::vector<int> corner;
  std::size_t max_degree = 0;  // max over x in the box of the degree restricted to the box
  std::size_t argmax_site = 0;
  bool good = false;
};

struct GoodBoxField {
  std::size_t L = 0;
  int side = 0;
  double threshold = 0.0;  // L^{gamma - eps}
  std::vector<int> boxes_per_dim;
  std::vector<GoodBox> boxes;  // row-major over box indices
  stats::Proportion good_fraction;
};

// Partitions the lattice into boxes of side L^{1/d}. Throws SpecError when
// the region is smaller than one box or not a multiple of the box side.
GoodBoxField good_box_field(const LatticeGraph& graph, std::size_t L, double gamma, double eps,
                            double level = 0.95, Execution ex = Execution::parallel);

struct PathExponent {
  double value = 0.0;
  bool positive = false;
  bool eventually_positive = false;  // holds for every large enough L
  // Smallest L = m^d with the expression positive for every m' >= m.
  std::optional<double> minimal_L;
};

// c4 L^{gamma-eps} - 2^{1+1/d} log((1+lambda)/lambda) L^{1/d}
PathExponent infection_path_exponent(double L, int d, double gamma, double eps, double lambda, double c4);

struct SurvivalRow {
  int side = 0;
  double horizon = 0.0;
  std::size_t replicas = 0;
  std::size_t initial_size = 0;
  double median = 0.0;  // +inf when at least half the replicas were censored
  stats::Interval median_ci;
  std::size_t censored = 0;          // alive at the horizon
  std::size_t budget_exhausted = 0;  // stopped by the event budget, also censored
  double mean_events = 0.0;
  std::vector<double> times;  // extinction times, +inf when censored
};

struct SurvivalContrast {
  int from_side = 0;
  int to_side = 0;
  bool increasing_separated = false;   // ci_lo(to) > ci_hi(from)
  bool superlinear_separated = false;  // ci_lo(to) > (to/from) ci_hi(from)
  double ratio = 0.0;                  // median(to) / median(from)
};

struct SurvivalTable {
  RenormConfig config;
  std::vector<SurvivalRow> rows;
  std::vector<SurvivalContrast> contrasts;
  // log median against log side over uncensored rows
  std::optional<stats::LinearFit> loglog_fit;
  stats::Interval loglog_slope_ci;
};

struct BoxSurvivalOptions {
  double sub_box_fraction = 0.5;  // side of the initially infected central sub-box
  std::uint64_t event_budget = 200'000'000;  // per replica
  double level = 0.95;
  ArrowMode arrows = ArrowMode::per_vertex;
  double arrow_cap = 0.0;
  Execution execution = Execution::parallel;
};

// Lattice graph as a one-dimensional windowed graph over site indices, so the
// contact engine can run on it.
WindowedGraph lattice_as_windowed(const LatticeGraph& graph);

// Sites of the central sub-box with the given side.
std::vector<Vertex> central_sub_box(const std::vector<int>& dims, int sub_side);

// Extinction time of the contact process on a single lattice draw started
// from the central sub-box; +inf when censored.
double box_extinction_time(const LatticeGraph& graph, double lambda, double horizon, double sub_box_fraction,
                           std::uint64_t seed, const BoxSurvivalOptions& opts, Fate* fate = nullptr,
                           std::uint64_t* events = nullptr);

// Annealed: a fresh Boolean-lattice draw per replica. horizons holds one
// value per side.
SurvivalTable box_survival_experiment(const RenormConfig& config, const std::vector<int>& sides,
                                      const std::vector<double>& horizons, std::size_t replicas,
                                      std::uint64_t seed, const BoxSurvivalOptions& opts = {});

}  // namespace cpphase
