#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cpphase/graph.hpp"

namespace cpphase {

// Long-range percolation connection function phi: N -> [0,1], either the
// power law phi(k) = k^-delta or an explicit table phi(1..m).
struct ConnectionFunction {
  std::optional<double> delta;
  std::vector<double> table;  // table[k-1] = phi(k)
  // For tables: phi(k) = 0 for k > table.size() is known to be the full law.
  // Without it the condition checkers cannot bound the tail.
  bool table_tail_known = false;

  static ConnectionFunction power_law(double delta);
  static ConnectionFunction from_table(std::vector<double> table, bool tail_known = true);

  double operator()(std::uint64_t k) const;
  void validate() const;
};

struct LrpSpec {
  ConnectionFunction phi = ConnectionFunction::power_law(2.5);
  bool augment = false;  // add nearest-neighbour links even if phi(1) < 1
};

// Spacing law of a renewal point process.
struct SpacingLaw {
  enum class Kind { constant, uniform };
  Kind kind = Kind::uniform;
  double a = 0.5;
  double b = 1.5;
  double sample(double u) const;
  double mean() const;
};

// Stationary point process on R under its Palm version (a point at 0).
struct PointProcess {
  enum class Kind { unit_lattice, renewal, poisson };
  Kind kind = Kind::unit_lattice;
  SpacingLaw spacing;
};

// Radius law rho. Pareto(alpha) with scale s has P(R > r) = (r/s)^-alpha for
// r >= s, so the mean is finite exactly when alpha > 1.
struct RadiusLaw {
  enum class Kind { pareto, constant, table };
  Kind kind = Kind::pareto;
  double alpha = 2.0;
  double scale = 0.25;
  double value = 0.5;
  std::vector<double> values;
  std::vector<double> probs;

  double sample(double u) const;
  double mean() const;  // +inf when infinite
  void validate() const;
};

struct GilbertSpec {
  PointProcess points;
  RadiusLaw radius;
};

// Pluggable WDRCM connection function phi(u, v, r) with a support bound:
// phi(u, v, r) = 0 whenever r > range(u, v). range may be +inf.
struct WdrcmKernel {
  std::string name;
  std::function<double(double, double, double)> prob;
  std::function<double(double, double)> range;

  // 1{ r <= u^-gamma v^-gamma }
  static WdrcmKernel product(double gamma);
  // phi == 0
  static WdrcmKernel zero();
};

// Symmetry in the marks, monotonicity in all three arguments and values in
// [0,1], checked on a grid x grid x grid sample. Throws SpecError.
void validate_kernel(const WdrcmKernel& kernel, int grid = 20);

struct WdrcmSpec {
  double gamma = 0.4;
  double mu = 0.1;
  PointProcess points;
  WdrcmKernel kernel = WdrcmKernel::product(0.4);
};

struct BooleanLatticeSpec {
  int dimension = 2;
  double gamma = 0.75;
};

// Law of the clique sizes K_n in the clique chain. The discrete Pareto(alpha)
// law is ceil(u^-1/alpha), so E K^2 < inf exactly when alpha > 2.
struct CliqueSizeLaw {
  enum class Kind { constant, pareto, table };
  Kind kind = Kind::constant;
  int value = 1;
  double alpha = 3.0;
  std::vector<int> sizes;
  std::vector<double> probs;
  int cap = 1 << 20;  // hard cap on sampled sizes

  int sample(double u) const;
  bool finite_second_moment() const;
  void validate() const;
};

struct CliqueChainSpec {
  CliqueSizeLaw size;
};

using ModelSpec = std::variant<LrpSpec, GilbertSpec, WdrcmSpec, BooleanLatticeSpec, CliqueChainSpec>;

std::string model_name(const ModelSpec& spec);
void validate(const ModelSpec& spec);

// Each pair {x,y} of the window is an edge independently with probability
// phi(|x-y|). Cost is linear in window length plus edge count.
WindowedGraph lrp_generate(const LrpSpec& spec, Window window, std::uint64_t seed);
// Distance beyond which lrp_generate stops sampling (phi(k)*pairs < 1e-12).
std::uint64_t lrp_cutoff_distance(const LrpSpec& spec, std::size_t window_length);
// Expected number of edges skipped by the cutoff.
double lrp_truncation_bias(const LrpSpec& spec, std::size_t window_length);

// Palm point positions for the vertices of the window (X_0 = 0).
std::vector<double> sample_points(const PointProcess& points, Window window, std::uint64_t seed);

WindowedGraph gilbert_generate(const GilbertSpec& spec, Window window, std::uint64_t seed);
// Deterministic part: {i,j} is an edge iff |X_i - X_j| <= R_i + R_j or |i-j| = 1.
WindowedGraph gilbert_build(Window window, std::vector<double> positions, std::vector<double> radii);

WindowedGraph wdrcm_generate(const WdrcmSpec& spec, Window window, std::uint64_t seed);
WindowedGraph wdrcm_build(Window window, std::vector<double> positions, std::vector<double> marks,
                          const WdrcmKernel& kernel, std::uint64_t seed);

LatticeGraph boolean_lattice_generate(const BooleanLatticeSpec& spec, std::vector<int> box,
                                      std::uint64_t seed);
// Edge {z,v} iff |z - v| <= u_z^-gamma/d + u_v^-gamma/d (Euclidean norm).
LatticeGraph boolean_lattice_build(std::vector<int> box, std::vector<double> marks, double gamma);

struct CliqueChain {
  WindowedGraph graph;
  std::vector<Vertex> roots;  // label of backbone vertex n in the relabelled graph
  std::vector<int> clique_sizes;
};
// Backbone path of the window's length; backbone vertex n carries a clique of
// size K_n glued at n. Each clique occupies consecutive labels, root first.
CliqueChain clique_chain_generate(const CliqueChainSpec& spec, Window backbone, std::uint64_t seed);

// One-dimensional models (everything except the Boolean lattice).
WindowedGraph generate(const ModelSpec& spec, Window window, std::uint64_t seed);

// Star S_k: centre 0, leaves 1..k.
WindowedGraph star_graph(std::size_t leaves);

enum class Verdict { satisfied, violated, inconclusive };
std::string to_string(Verdict v);

struct ConditionReport {
  std::string name;
  double partial = 0.0;
  double tail_bound = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::string witness;
};

struct LrpConditionReport {
  ConditionReport sparsity;      // sum phi(k) < inf
  ConditionReport first_moment;  // sum k phi(k) < inf
  bool has_certain_edge = false; // {k : phi(k) = 1} nonempty
  Verdict hypothesis = Verdict::inconclusive;
};

LrpConditionReport lrp_condition_check(const LrpSpec& spec, std::uint64_t k_max, double tol);

// sum_n 2^{2n} int int_{[a_n,1]^2} phi(u,v,2^n) du dv with a_n = 2^{-n-mu n}.
ConditionReport wdrcm_cut_condition(const WdrcmSpec& spec, int n_max, double tol);
// Area of {(u,v) in [a,1]^2 : uv <= c}.
double product_kernel_area(double a, double c);

// P(e(0) = 1) = prod_{k>=2} (1 - phi(k))^k when phi(1) = 1 (k pairs at
// distance k cross a link), bracketed using the tail factor
// exp(-sum_{k>k_max} k phi/(1-phi)).
struct CutProbability {
  double lo = 0.0;
  double hi = 0.0;
  bool exact = false;
};
CutProbability lrp_cut_probability(const LrpSpec& spec, std::uint64_t k_max);

}  // namespace cpphase
