#include "cpphase/graph.hpp"

#include <algorithm>
#include <string>

#include "cpphase/error.hpp"

namespace cpphase {

std::size_t Adjacency::max_degree() const noexcept {
  std::size_t best = 0;
  for (std::size_t i = 0; i < size(); ++i) best = std::max(best, degree(i));
  return best;
}

void build_csr(std::size_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
               std::vector<std::size_t>& offsets, std::vector<std::uint32_t>& targets) {
  offsets.assign(n + 1, 0);
  for (const auto& [a, b] : edges) {
    ++offsets[a + 1];
    ++offsets[b + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  targets.assign(offsets[n], 0);
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& [a, b] : edges) {
    targets[fill[a]++] = b;
    targets[fill[b]++] = a;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
              targets.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
  }
}

WindowedGraph::WindowedGraph(Window window, std::vector<Edge> edges, bool augmented,
                             std::vector<double> positions, std::vector<double> marks)
    : window_(window),
      edges_(std::move(edges)),
      augmented_(augmented),
      positions_(std::move(positions)),
      marks_(std::move(marks)) {
  if (window_.hi < window_.lo) throw DomainError("empty window");
  if (window_.length() > std::size_t{0xFFFFFFFF}) throw DomainError("window too large");
  const std::size_t n = size();
  if (!positions_.empty() && positions_.size() != n)
    throw DomainError("positions must cover every vertex of the window");
  if (!marks_.empty() && marks_.size() != n)
    throw DomainError("marks must cover every vertex of the window");
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    if (!(positions_[i] > positions_[i - 1]))
      throw DomainError("positions must be strictly increasing in the vertex index");
  }
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u == e.v) throw DomainError("self-loop at vertex " + std::to_string(e.u));
    if (!contains(e.u) || !contains(e.v))
      throw DomainError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                        "} leaves the window");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  std::vector<std::pair<std::uint32_t, std::uint32_t>> local_edges;
  local_edges.reserve(edges_.size());
  for (const auto& e : edges_) {
    local_edges.emplace_back(static_cast<std::uint32_t>(local(e.u)),
                             static_cast<std::uint32_t>(local(e.v)));
  }
  build_csr(n, local_edges, offsets_, targets_);

  if (augmented_) {
    for (std::size_t i = 1; i < n; ++i) {
      const auto nb = neighbours_local(i);
      if (!std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(i - 1)))
        throw DomainError("augmented graph is missing link {" + std::to_string(global(i - 1)) +
                          "," + std::to_string(global(i)) + "}");
    }
  }
}

WindowedGraph WindowedGraph::path(Window window) {
  std::vector<Edge> edges;
  for (Vertex v = window.lo + 1; v <= window.hi; ++v) edges.push_back({v - 1, v});
  return WindowedGraph(window, std::move(edges), true);
}

std::vector<Vertex> WindowedGraph::neighbours(Vertex v) const {
  if (!contains(v)) throw DomainError("vertex " + std::to_string(v) + " outside window");
  std::vector<Vertex> out;
  for (auto j : neighbours_local(local(v))) out.push_back(global(j));
  return out;
}

bool WindowedGraph::has_edge(Vertex a, Vertex b) const {
  if (!contains(a) || !contains(b)) return false;
  const auto nb = neighbours_local(local(a));
  return std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(local(b)));
}

double WindowedGraph::position(Vertex v) const {
  if (!contains(v) || positions_.empty()) throw DomainError("no position for vertex");
  return positions_[local(v)];
}

double WindowedGraph::mark(Vertex v) const {
  if (!contains(v) || marks_.empty()) throw DomainError("no mark for vertex");
  return marks_[local(v)];
}

WindowedGraph WindowedGraph::shifted(Vertex offset) const {
  std::vector<Edge> moved;
  moved.reserve(edges_.size());
  for (const auto& e : edges_) moved.push_back({e.u + offset, e.v + offset});
  return WindowedGraph({window_.lo + offset, window_.hi + offset}, std::move(moved), augmented_,
                       positions_, marks_);
}

bool WindowedGraph::adjacency_consistent() const {
  std::size_t incidences = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto nb = neighbours_local(i);
    incidences += nb.size();
    if (!std::is_sorted(nb.begin(), nb.end())) return false;
    for (auto j : nb) {
      const Vertex a = std::min(global(i), global(j));
      const Vertex b = std::max(global(i), global(j));
      if (!std::binary_search(edges_.begin(), edges_.end(), Edge{a, b})) return false;
    }
  }
  return incidences == 2 * edges_.size();
}

bool operator==(const WindowedGraph& a, const WindowedGraph& b) {
  return a.window_ == b.window_ && a.augmented_ == b.augmented_ && a.edges_ == b.edges_ &&
         a.positions_ == b.positions_ && a.marks_ == b.marks_;
}

std::size_t degree(const WindowedGraph& graph, Vertex v) {
  if (!graph.contains(v)) throw DomainError("vertex " + std::to_string(v) + " outside window");
  return graph.adjacency().degree(graph.local(v));
}

GraphStats edge_density(const WindowedGraph& graph) {
  GraphStats s;
  s.n = graph.size();
  s.edge_count = graph.edge_count();
  if (s.n > 0) {
    s.empirical_mean_degree = 2.0 * static_cast<double>(s.edge_count) / static_cast<double>(s.n);
    s.delta_hat = s.empirical_mean_degree;
  }
  return s;
}

WindowedGraph induced_subgraph(const WindowedGraph& graph, Window interval) {
  if (interval.hi < interval.lo || !graph.contains(interval.lo) || !graph.contains(interval.hi))
    throw DomainError("interval [" + std::to_string(interval.lo) + "," +
                      std::to_string(interval.hi) + "] outside window");
  std::vector<Edge> kept;
  const auto first = std::lower_bound(graph.edges().begin(), graph.edges().end(),
                                      Edge{interval.lo, interval.lo});
  for (auto it = first; it != graph.edges().end() && it->u <= interval.hi; ++it) {
    if (it->v <= interval.hi) kept.push_back(*it);
  }
  auto slice = [&](const std::vector<double>& xs) {
    if (xs.empty()) return std::vector<double>{};
    return std::vector<double>(xs.begin() + static_cast<std::ptrdiff_t>(graph.local(interval.lo)),
                               xs.begin() + static_cast<std::ptrdiff_t>(graph.local(interval.hi)) + 1);
  };
  return WindowedGraph(interval, std::move(kept), graph.augmented(), slice(graph.positions()),
                       slice(graph.marks()));
}

double interior_mean_degree(const WindowedGraph& graph, std::size_t margin) {
  const auto adj = graph.adjacency();
  if (2 * margin >= graph.size()) throw DomainError("margin leaves no interior vertices");
  double total = 0;
  for (std::size_t i = margin; i + margin < graph.size(); ++i) total += static_cast<double>(adj.degree(i));
  return total / static_cast<double>(graph.size() - 2 * margin);
}

LatticeGraph::LatticeGraph(std::vector<int> dims,
                           std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
                           std::vector<double> marks)
    : dims_(std::move(dims)), marks_(std::move(marks)) {
  if (dims_.empty()) throw DomainError("lattice needs at least one dimension");
  site_count_ = 1;
  for (int d : dims_) {
    if (d <= 0) throw DomainError("lattice box must be nonempty");
    site_count_ *= static_cast<std::size_t>(d);
  }
  if (!marks_.empty() && marks_.size() != site_count_) throw DomainError("marks must cover the box");
  for (const auto& [a, b] : edges) {
    if (a == b || a >= site_count_ || b >= site_count_) throw DomainError("invalid lattice edge");
  }
  build_csr(site_count_, edges, offsets_, targets_);
}

std::vector<int> LatticeGraph::coords(std::size_t site) const {
  std::vector<int> c(dims_.size());
  for (std::size_t k = dims_.size(); k-- > 0;) {
    c[k] = static_cast<int>(site % static_cast<std::size_t>(dims_[k]));
    site /= static_cast<std::size_t>(dims_[k]);
  }
  return c;
}

std::size_t LatticeGraph::site(std::span<const int> c) const {
  std::size_t s = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (c[k] < 0 || c[k] >= dims_[k]) throw DomainError("lattice coordinate outside box");
    s = s * static_cast<std::size_t>(dims_[k]) + static_cast<std::size_t>(c[k]);
  }
  return s;
}

}  // namespace cpphase
