#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpphase/cuts.hpp"
#include "cpphase/graph.hpp"

namespace cpphase {

enum class Variant { standard, half_line_dagger, rightmost_eta };

// How infection arrows are generated in the graphical representation.
//  per_vertex: one Poisson process of rate cap*deg(v) per vertex, each arrow
//              aimed at a uniform neighbour. Cheapest.
//  per_edge:   one Poisson process of rate cap per directed edge, keyed by the
//              global endpoint labels, so that runs on a graph and on any
//              supergraph share the arrows of their common edges.
// An arrow is used iff its thinning uniform is below lambda/cap; runs with
// the same seed and cap are therefore monotone in lambda.
enum class ArrowMode { per_vertex, per_edge };

enum class Fate { extinct, alive_at_horizon, boundary_censored, target_hit, budget_exhausted };
std::string to_string(Fate f);
std::string to_string(Variant v);

struct SimParams {
  double lambda = 1.0;
  double horizon = 1.0;
  std::vector<Vertex> initial;
  std::vector<Vertex> permanent;
  Variant variant = Variant::standard;
  std::vector<double> sample_times;  // increasing, <= horizon
  bool record_sets = false;          // keep the infected set at every sample time
  bool record_jumps = false;         // right-most particle jump chain
  // Censor once the infection reaches a vertex within `margin` of a window
  // end (only the right end for the half-line variants). 0 disables it.
  std::size_t margin = 0;
  std::vector<Vertex> targets;  // stop as soon as one of them is infected
  bool stop_on_extinction = true;
  std::uint64_t event_budget = 0;  // 0: unlimited
  double arrow_cap = 0.0;          // 0: lambda
  ArrowMode arrows = ArrowMode::per_vertex;
};

// Throws SpecError on invalid parameters.
void validate(const SimParams& params, const WindowedGraph& graph);

struct Snapshot {
  double t = 0.0;
  std::size_t count = 0;
  Vertex rightmost = 0;  // max of the infected set (lo - 1 when empty)
  std::vector<Vertex> set;
};

struct Jump {
  double t = 0.0;
  Vertex x = 0;
};

struct SimOutcome {
  Fate fate = Fate::alive_at_horizon;
  double time = 0.0;  // extinction, censoring, hitting or stopping time; horizon if alive
  Vertex hit = 0;     // target reached (target_hit) or vertex that triggered censoring
  std::vector<Snapshot> samples;
  std::vector<Jump> jumps;  // X_t after every change, starting with X_0
  std::uint64_t events = 0;
  std::uint64_t seed = 0;
  std::size_t final_count = 0;
  std::vector<Vertex> final_set;  // filled when record_sets is on

  bool survived() const noexcept { return fate != Fate::extinct; }
};

// Exact continuous-time simulation via a lazily realised graphical
// representation: recovery marks and infection arrows are Poisson processes
// generated epoch by epoch (unit time slices) from counter-based streams keyed
// by (seed, vertex or edge, epoch). Two runs with the same seed and arrow
// cap see the same marks, which gives the couplings in lambda, initial set,
// and variant (xi-dagger versus eta).
//
// Samples after the stopping time are omitted, except after extinction of a
// process without permanent vertices, where the empty state is absorbing and
// the samples up to the horizon are filled in.
SimOutcome simulate(const WindowedGraph& graph, const SimParams& params, std::uint64_t seed);

// eta on the half-line graph: vertex graph.lo() is permanently infected and at
// each change of the right-most infected vertex X every vertex left of X is
// reinfected. Starts from {lo, ..., lo + x0}.
SimOutcome simulate_eta(const WindowedGraph& graph, double lambda, double horizon, std::uint64_t seed,
                        Vertex x0 = 0, std::vector<double> sample_times = {}, std::size_t margin = 0);

// Block process Z_n read off the jump chain of X.
struct BlockWalk {
  std::vector<std::ptrdiff_t> z;  // block index after every block change, z[0] = block of X_0
  std::vector<double> times;
  std::size_t up_steps = 0;
  std::size_t down_steps = 0;
  std::size_t long_steps = 0;  // |Z_{n+1} - Z_n| > 1
  bool truncated = false;      // X left the decomposed range; z is the partial walk
};
BlockWalk extract_block_process(const SimOutcome& eta, const CutDecomposition& dec);

struct DominationReport {
  bool held = true;
  std::size_t replicas = 0;
  std::size_t comparisons = 0;
  std::optional<std::size_t> failing_replica;
  double failing_time = 0.0;
  Vertex witness = 0;  // vertex in xi-dagger but not in eta
};

// Runs xi-dagger and eta on identical marks and checks inclusion at every
// sample time (n_samples equally spaced in (0, horizon]).
DominationReport domination_check(const WindowedGraph& graph, double lambda, double horizon,
                                  std::uint64_t seed, std::size_t replicas, std::size_t n_samples);

}  // namespace cpphase
