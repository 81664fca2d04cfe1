#include "cpphase/cuts.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cpphase/error.hpp"

namespace cpphase {

Window admissible_links(const WindowedGraph& graph, std::size_t margin) {
  const auto m = static_cast<Vertex>(margin);
  return {graph.lo() + std::max<Vertex>(m, 1), graph.hi() - m};
}

namespace {

void require_admissible(const WindowedGraph& graph, Vertex z, std::size_t margin) {
  const Window w = admissible_links(graph, margin);
  if (!w.contains(z))
    throw MarginError("link z=" + std::to_string(z) + " is outside the admissible range [" +
                      std::to_string(w.lo) + "," + std::to_string(w.hi) + "] (margin " +
                      std::to_string(margin) + ")");
}

}  // namespace

std::size_t edges_above(const WindowedGraph& graph, Vertex z, std::size_t margin) {
  require_admissible(graph, z, margin);
  std::size_t count = 0;
  const auto adj = graph.adjacency();
  // Walk the vertices left of z and count neighbours at or right of z.
  for (Vertex x = graph.lo(); x < z; ++x) {
    const auto nb = adj.neighbours(graph.local(x));
    const auto first = std::lower_bound(nb.begin(), nb.end(), static_cast<std::uint32_t>(graph.local(z)));
    count += static_cast<std::size_t>(nb.end() - first);
  }
  return count;
}

std::size_t edges_above(const WindowedGraph& graph, Vertex z) {
  return edges_above(graph, z, graph.default_margin());
}

std::size_t edges_above_scan(const WindowedGraph& graph, Vertex z, std::size_t margin) {
  require_admissible(graph, z, margin);
  std::size_t count = 0;
  for (const auto& e : graph.edges()) {
    if (e.u <= z - 1 && e.v >= z) ++count;
  }
  return count;
}

CutProfile cut_profile(const WindowedGraph& graph, std::size_t margin) {
  CutProfile p;
  p.links = admissible_links(graph, margin);
  const std::size_t n = p.links.length();
  p.edges_above.assign(n, 0);
  p.max_length.assign(n, 0);
  if (n == 0) return p;

  // Edge {u,v} crosses every link z in [u+1, v]: difference array over z.
  std::vector<std::int64_t> diff(n + 1, 0);
  auto clip = [&](Vertex z) { return std::clamp<Vertex>(z - p.links.lo, 0, static_cast<Vertex>(n)); };
  for (const auto& e : graph.edges()) {
    const Vertex a = clip(e.u + 1);
    const Vertex b = clip(e.v + 1);
    if (a < b) {
      ++diff[static_cast<std::size_t>(a)];
      --diff[static_cast<std::size_t>(b)];
    }
  }
  std::int64_t run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    run += diff[i];
    p.edges_above[i] = static_cast<std::size_t>(run);
  }

  // Longest crossing edge: paint links in order of decreasing edge length,
  // skipping painted links with a union-find "next unpainted" pointer.
  std::vector<Edge> by_length(graph.edges());
  std::stable_sort(by_length.begin(), by_length.end(),
                   [](const Edge& x, const Edge& y) { return x.length() > y.length(); });
  std::vector<std::size_t> next(n + 1);
  std::iota(next.begin(), next.end(), 0);
  auto find = [&](std::size_t i) {
    std::size_t r = i;
    while (next[r] != r) r = next[r];
    while (next[i] != r) {
      const std::size_t up = next[i];
      next[i] = r;
      i = up;
    }
    return r;
  };
  for (const auto& e : by_length) {
    const auto a = static_cast<std::size_t>(clip(e.u + 1));
    const auto b = static_cast<std::size_t>(clip(e.v + 1));
    for (std::size_t i = find(a); i < b; i = find(i)) {
      p.max_length[i] = e.length();
      next[i] = i + 1;
    }
  }
  return p;
}

std::vector<Vertex> find_cut_points(const CutProfile& profile, std::size_t K) {
  if (K < 1) throw DomainError("K must be at least 1");
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < profile.edges_above.size(); ++i) {
    const std::size_t e = profile.edges_above[i];
    if (K == 1 ? e == 1 : e <= K) out.push_back(profile.links.lo + static_cast<Vertex>(i));
  }
  return out;
}

std::vector<Vertex> find_cut_points(const WindowedGraph& graph, std::size_t K, std::size_t margin) {
  return find_cut_points(cut_profile(graph, margin), K);
}

std::vector<Vertex> find_kl_cut_points(const CutProfile& profile, std::size_t K, std::size_t L) {
  if (K < 1) throw DomainError("K must be at least 1");
  if (L < 2) throw DomainError("L must be at least 2");
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < profile.edges_above.size(); ++i) {
    const std::size_t e = profile.edges_above[i];
    if (e >= 1 && e <= K && profile.max_length[i] <= static_cast<Vertex>(L) - 1)
      out.push_back(profile.links.lo + static_cast<Vertex>(i));
  }
  return out;
}

std::vector<Vertex> find_kl_cut_points(const WindowedGraph& graph, std::size_t K, std::size_t L,
                                       std::size_t margin) {
  return find_kl_cut_points(cut_profile(graph, margin), K, L);
}

std::vector<Vertex> thin_cut_points(const std::vector<Vertex>& cuts, std::size_t L) {
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < cuts.size(); i += L + 1) out.push_back(cuts[i]);
  return out;
}

std::ptrdiff_t CutDecomposition::block_of(Vertex v) const {
  if (cut_points.size() < 2 || v < cut_points.front() || v >= cut_points.back()) return -1;
  const auto it = std::upper_bound(cut_points.begin(), cut_points.end(), v);
  return (it - cut_points.begin()) - 1;
}

CutDecomposition decomposition_from_cuts(const WindowedGraph& graph, std::vector<Vertex> cuts,
                                         Window links, std::size_t K) {
  if (!std::is_sorted(cuts.begin(), cuts.end()) ||
      std::adjacent_find(cuts.begin(), cuts.end()) != cuts.end())
    throw DomainError("cut points must be strictly increasing");
  if (cuts.size() < 2)
    throw DecompositionUnavailable("fewer than two cut points in [" + std::to_string(links.lo) + "," +
                                   std::to_string(links.hi) +
                                   "]: the window is too small or the graph has no cut points");
  CutDecomposition d;
  d.K = K;
  d.links = links;
  d.raw_cuts = cuts;
  d.cut_points = std::move(cuts);
  for (std::size_t k = 1; k < d.cut_points.size(); ++k)
    d.blocks.push_back({d.cut_points[k - 1], d.cut_points[k] - 1});
  d.block_edges.assign(d.blocks.size(), 0);
  for (const auto& e : graph.edges()) {
    const auto bu = d.block_of(e.u);
    if (bu >= 0 && bu == d.block_of(e.v)) ++d.block_edges[static_cast<std::size_t>(bu)];
  }
  return d;
}

CutDecomposition block_decomposition(const WindowedGraph& graph, const DecompositionOptions& opts) {
  const std::size_t margin = opts.margin.value_or(graph.default_margin());
  const CutProfile profile = cut_profile(graph, margin);
  std::vector<Vertex> raw =
      opts.L ? find_kl_cut_points(profile, opts.K, *opts.L) : find_cut_points(profile, opts.K);
  Window links = profile.links;
  links.lo = std::max(links.lo, opts.anchor);
  raw.erase(raw.begin(), std::lower_bound(raw.begin(), raw.end(), links.lo));
  std::vector<Vertex> used = (opts.L && opts.thin) ? thin_cut_points(raw, *opts.L) : raw;
  CutDecomposition d = decomposition_from_cuts(graph, std::move(used), links, opts.K);
  d.raw_cuts = std::move(raw);
  d.L = opts.L;
  d.thinned = opts.L && opts.thin;
  return d;
}

BlockStats block_statistics(const CutDecomposition& dec, const WindowedGraph& graph,
                            const BlockStatsOptions& opts) {
  const std::size_t nb = dec.blocks.size();
  if (nb < opts.min_blocks)
    throw InsufficientData("only " + std::to_string(nb) + " blocks, need at least " +
                           std::to_string(opts.min_blocks));
  BlockStats s;
  s.blocks = nb;
  s.p_hat = static_cast<double>(dec.cut_points.size()) / static_cast<double>(dec.links.length());

  std::vector<double> len(nb), len_sq(nb), edges(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    len[k] = static_cast<double>(dec.blocks[k].length());
    len_sq[k] = len[k] * len[k];
    edges[k] = static_cast<double>(dec.block_edges[k]);
  }
  s.mean_block = stats::mean(len);
  s.mean_block_sq = stats::mean(len_sq);
  s.mean_block_edges = stats::mean(edges);

  // tau(z) = distance to the next cut point, averaged over whole cycles.
  double tau_sum = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    const double l = len[k];
    tau_sum += l * (l - 1.0) / 2.0;
  }
  s.tau_hat = tau_sum / static_cast<double>(dec.cut_points.back() - dec.cut_points.front());

  const auto mean_fn = [](std::span<const double> xs) { return stats::mean(xs); };
  s.mean_block_ci = stats::bootstrap_ci(len, mean_fn, opts.bootstrap_reps, opts.level,
                                        derive_stream(opts.seed, "kac", 0));
  s.mean_block_sq_ci = stats::bootstrap_ci(len_sq, mean_fn, opts.bootstrap_reps, opts.level,
                                           derive_stream(opts.seed, "kac", 1));
  s.mean_block_edges_ci = stats::bootstrap_ci(edges, mean_fn, opts.bootstrap_reps, opts.level,
                                              derive_stream(opts.seed, "kac", 2));

  const double inv_p = 1.0 / s.p_hat;
  const double second = (1.0 + 2.0 * s.tau_hat) * inv_p;
  s.kac_residual = std::abs(s.mean_block - inv_p);
  s.kac_residual_sq = std::abs(s.mean_block_sq - second);
  // A degenerate bootstrap interval (all blocks equal) still admits exact agreement.
  const double slack = 1e-9 * std::max(1.0, inv_p);
  s.kac_within_band = s.mean_block_ci.lo - slack <= inv_p && inv_p <= s.mean_block_ci.hi + slack;
  s.kac_sq_within_band =
      s.mean_block_sq_ci.lo - slack * second <= second && second <= s.mean_block_sq_ci.hi + slack * second;

  s.delta_hat = edge_density(graph).delta_hat;
  s.edge_bound = s.delta_hat / (2.0 * s.p_hat);
  return s;
}

}  // namespace cpphase
