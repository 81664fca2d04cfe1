#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cpphase/graph.hpp"
#include "cpphase/stats.hpp"

namespace cpphase {

// Links z whose edges-above count is reported: z-1 and z inside the window
// and both at distance >= margin from its ends, i.e. [lo + max(margin,1), hi - margin].
Window admissible_links(const WindowedGraph& graph, std::size_t margin);

// e(z) = #{ {x,y} in E : x <= z-1, y >= z }, truncated to the window.
// Throws MarginError when z is not admissible.
std::size_t edges_above(const WindowedGraph& graph, Vertex z, std::size_t margin);
std::size_t edges_above(const WindowedGraph& graph, Vertex z);
// Reference implementation scanning every edge.
std::size_t edges_above_scan(const WindowedGraph& graph, Vertex z, std::size_t margin);

// e(z) and the longest crossing edge for every admissible z.
struct CutProfile {
  Window links;
  std::vector<std::size_t> edges_above;  // indexed by z - links.lo
  std::vector<Vertex> max_length;        // 0 when nothing crosses
  std::size_t at(Vertex z) const { return edges_above[static_cast<std::size_t>(z - links.lo)]; }
};
CutProfile cut_profile(const WindowedGraph& graph, std::size_t margin);

// K-cut points: e(z) <= K. For K = 1 this is e(z) = 1; on an augmented graph
// that forces the crossing edge to be {z-1, z}.
std::vector<Vertex> find_cut_points(const WindowedGraph& graph, std::size_t K, std::size_t margin);
std::vector<Vertex> find_cut_points(const CutProfile& profile, std::size_t K);

// (K,L)-cut points: e(z) <= K and no crossing edge longer than L-1.
std::vector<Vertex> find_kl_cut_points(const WindowedGraph& graph, std::size_t K, std::size_t L,
                                       std::size_t margin);
std::vector<Vertex> find_kl_cut_points(const CutProfile& profile, std::size_t K, std::size_t L);

// Keeps cuts[0] and then every (L+1)-st cut after the last kept one.
std::vector<Vertex> thin_cut_points(const std::vector<Vertex>& cuts, std::size_t L);

struct CutDecomposition {
  std::size_t K = 1;
  std::optional<std::size_t> L;
  bool thinned = false;
  Window links;                    // admissible link range the cuts were searched in
  std::vector<Vertex> raw_cuts;    // every (K,L)- or K-cut in the range
  std::vector<Vertex> cut_points;  // anchored (and possibly thinned) sequence
  std::vector<Window> blocks;      // C_k = [z_{k-1}, z_k - 1]
  std::vector<std::size_t> block_edges;  // edges with both endpoints in C_k

  // Index of the block containing v, or -1 outside the covered range.
  std::ptrdiff_t block_of(Vertex v) const;
};

struct DecompositionOptions {
  std::size_t K = 1;
  std::optional<std::size_t> L;
  bool thin = true;  // only used when L is set
  std::optional<std::size_t> margin;  // default: graph.default_margin()
  Vertex anchor = 0;  // z_0 is the first cut point >= anchor
};

// Throws DecompositionUnavailable with fewer than two cut points.
CutDecomposition block_decomposition(const WindowedGraph& graph, const DecompositionOptions& opts);
// Builds blocks and internal edge counts for a given cut sequence.
CutDecomposition decomposition_from_cuts(const WindowedGraph& graph, std::vector<Vertex> cuts,
                                         Window links, std::size_t K = 1);

struct BlockStats {
  std::size_t blocks = 0;
  double p_hat = 0.0;
  double mean_block = 0.0;
  double mean_block_sq = 0.0;
  double tau_hat = 0.0;
  double mean_block_edges = 0.0;
  double delta_hat = 0.0;
  stats::Interval mean_block_ci;
  stats::Interval mean_block_sq_ci;
  stats::Interval mean_block_edges_ci;
  double kac_residual = 0.0;     // |mean_block - 1/p_hat|
  double kac_residual_sq = 0.0;  // |mean_block_sq - (1 + 2 tau_hat)/p_hat|
  bool kac_within_band = false;     // 1/p_hat inside mean_block_ci
  bool kac_sq_within_band = false;  // (1+2 tau_hat)/p_hat inside mean_block_sq_ci
  double edge_bound = 0.0;          // delta_hat / (2 p_hat)
};

struct BlockStatsOptions {
  std::size_t min_blocks = 30;
  double level = 0.99;
  int bootstrap_reps = 1000;
  std::uint64_t seed = 0;
};

// Throws InsufficientData with fewer than min_blocks blocks.
BlockStats block_statistics(const CutDecomposition& dec, const WindowedGraph& graph,
                            const BlockStatsOptions& opts = {});

}  // namespace cpphase
