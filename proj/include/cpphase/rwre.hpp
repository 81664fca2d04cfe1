#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpphase/cuts.hpp"
#include "cpphase/graph.hpp"
#include "cpphase/parallel.hpp"
#include "cpphase/stats.hpp"

namespace cpphase {

// Local description of a block C = [a, b] for the escape problem.
struct BlockProblem {
  std::size_t size = 1;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> internal;  // local endpoints in [0, size)
  std::vector<std::uint32_t> exits;  // left endpoint of each edge leaving C to the right
  // Edges entering C from the left, as (feeder index, local endpoint); one
  // feeder per distinct outside endpoint.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
  std::size_t feeders = 0;

  std::size_t internal_edges() const noexcept { return internal.size(); }
  // Identical problems have identical keys.
  std::vector<std::int64_t> key() const;
};

// Block [a, b] of `graph` together with its crossing edges.
BlockProblem make_block_problem(const WindowedGraph& graph, Window block);
// A block with `size` vertices on a path, no entries, and `exits` exit edges
// all leaving from the right-most vertex.
BlockProblem path_block(std::size_t size, std::size_t exits = 1);

// extremal_eta: the block starts fully infected, each feeder is permanently
//   infected (everything left of the block is infected in eta), holes are
//   refilled whenever the right-most particle moves, and the walk steps up
//   when an exit edge fires, down when only the feeders remain infected.
// plain: contact process on the block alone, fully infected at time 0; up
//   when an exit edge fires before the block recovers.
enum class OmegaMode { extremal_eta, plain };
std::string to_string(OmegaMode m);

struct OmegaEstimate {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  std::uint64_t censored = 0;  // replicas that hit the event budget or horizon; not in trials
  double omega = 0.0;          // hits / trials
  double se = 0.0;
  stats::Interval ci;
  bool degenerate = false;     // omega in {0, 1}
  double clipped = 0.0;        // omega moved into [1/(2 trials), 1 - 1/(2 trials)]
};

struct OmegaOptions {
  OmegaMode mode = OmegaMode::extremal_eta;
  double level = 0.95;
  std::uint64_t event_budget = 10'000'000;  // per replica
  Execution execution = Execution::parallel;
};

// Monte Carlo probability that the walk on blocks steps up. Refuses fewer
// than 100 replicas (SpecError).
OmegaEstimate estimate_omega(const BlockProblem& block, double lambda, std::size_t replicas,
                             std::uint64_t seed, const OmegaOptions& opts = {});

// exp(-|C| - 2 lambda |E|). DomainError for an empty block or negative
// inputs. `warning` is set when lambda >= 1, outside the regime of the bound's
// derivation.
double omega_lower_bound(std::size_t block_size, std::size_t block_edges, double lambda,
                         bool* warning = nullptr);

enum class RwreVerdict { recurrent_indicated, transient_indicated, inconclusive };
std::string to_string(RwreVerdict v);

struct LedrappierResult {
  double value = 0.0;
  stats::Interval ci;
  RwreVerdict verdict = RwreVerdict::inconclusive;
  std::size_t blocks = 0;
  std::size_t degenerate = 0;
};

struct LedrappierOptions {
  double level = 0.99;
  int bootstrap_reps = 2000;
  std::size_t min_blocks = 30;
  std::uint64_t seed = 0;
  bool exclude_degenerate = false;  // default: clip degenerate estimates and count them
};

// Mean of log((1 - w)/w) over the blocks; `estimates[block_class[k]]` is the
// estimate used for block k. Bootstrap resamples blocks and perturbs every
// estimate by its standard error.
LedrappierResult ledrappier_functional(std::span<const OmegaEstimate> estimates,
                                       std::span<const std::size_t> block_class,
                                       const LedrappierOptions& opts = {});
// Known environment: exact mean, bootstrap over the sites.
LedrappierResult ledrappier_functional(std::span<const double> omegas, const LedrappierOptions& opts = {});

struct WalkStats {
  std::uint64_t steps = 0;
  std::uint64_t returns = 0;  // visits to 0 after time 0
  std::int64_t max_position = 0;
  std::int64_t final_position = 0;
};

// Reflected walk on {0, 1, ...}: from x > 0 step to x-1 with probability
// omegas[x-1] and to x+1 otherwise; from 0 step to 1. The environment is
// extended periodically beyond its length.
WalkStats rwre_simulate(std::span<const double> omegas, std::uint64_t steps, std::uint64_t seed);

struct BlockEnvironment {
  std::size_t index = 0;
  Window block;
  std::size_t size = 0;
  std::size_t edges = 0;
  std::size_t exits = 0;
  std::size_t problem = 0;  // index into PipelineReport::estimates
  double lower_bound = 0.0;
  bool bound_ok = true;     // 1 - omega + 3 SE >= lower_bound
};

struct CrossValidation {
  std::size_t runs = 0;
  std::size_t blocks_compared = 0;
  std::size_t blocks_agreeing = 0;
  std::size_t truncated_runs = 0;
  std::size_t long_steps = 0;  // |Z_{n+1} - Z_n| > 1 across all runs
  std::size_t steps = 0;
};

struct PipelineOptions {
  DecompositionOptions decomposition;
  OmegaOptions omega;
  LedrappierOptions ledrappier;
  std::size_t max_blocks = 0;  // 0: all blocks
  bool cross_validate = false;
  std::size_t cv_runs = 200;
  double cv_horizon = 200.0;
  std::size_t cv_min_visits = 30;
};

struct PipelineReport {
  CutDecomposition decomposition;
  std::vector<BlockEnvironment> blocks;
  std::vector<OmegaEstimate> estimates;  // one per distinct block problem
  LedrappierResult ledrappier;
  std::size_t bound_violations = 0;
  std::optional<CrossValidation> cross_validation;
};

PipelineReport pipeline_verdict(const WindowedGraph& graph, double lambda, std::size_t replicas,
                                std::uint64_t seed, const PipelineOptions& opts = {});

}  // namespace cpphase
