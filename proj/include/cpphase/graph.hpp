#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cpphase {

using Vertex = std::int64_t;

// Unordered pair stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  Vertex length() const noexcept { return v - u; }
  auto operator<=>(const Edge&) const = default;
};

// Integer interval [lo, hi]; every integer in it is a vertex.
struct Window {
  Vertex lo = 0;
  Vertex hi = -1;
  std::size_t length() const noexcept {
    return hi < lo ? 0 : static_cast<std::size_t>(hi - lo + 1);
  }
  bool contains(Vertex v) const noexcept { return lo <= v && v <= hi; }
  // Window of the given length starting at 0.
  static Window of_length(std::size_t n) { return {0, static_cast<Vertex>(n) - 1}; }
  auto operator<=>(const Window&) const = default;
};

// Compressed adjacency over local indices 0..size()-1, neighbours sorted.
struct Adjacency {
  std::span<const std::size_t> offsets;
  std::span<const std::uint32_t> targets;

  std::size_t size() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t degree(std::size_t i) const noexcept { return offsets[i + 1] - offsets[i]; }
  std::span<const std::uint32_t> neighbours(std::size_t i) const noexcept {
    return targets.subspan(offsets[i], degree(i));
  }
  std::size_t max_degree() const noexcept;
};

// Builds sorted CSR arrays from an undirected edge list over local indices.
void build_csr(std::size_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
               std::vector<std::size_t>& offsets, std::vector<std::uint32_t>& targets);

// Finite window realisation of a graph on Z with optional point positions and
// vertex marks (uniform marks U_i or radii R_i depending on the model).
// Immutable after construction.
class WindowedGraph {
 public:
  WindowedGraph() = default;
  WindowedGraph(Window window, std::vector<Edge> edges, bool augmented,
                std::vector<double> positions = {}, std::vector<double> marks = {});

  // Nearest-neighbour path Z_nn restricted to the window.
  static WindowedGraph path(Window window);

  const Window& window() const noexcept { return window_; }
  Vertex lo() const noexcept { return window_.lo; }
  Vertex hi() const noexcept { return window_.hi; }
  std::size_t size() const noexcept { return window_.length(); }
  bool contains(Vertex v) const noexcept { return window_.contains(v); }
  std::size_t local(Vertex v) const noexcept { return static_cast<std::size_t>(v - window_.lo); }
  Vertex global(std::size_t i) const noexcept { return window_.lo + static_cast<Vertex>(i); }

  bool augmented() const noexcept { return augmented_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  Adjacency adjacency() const noexcept { return {offsets_, targets_}; }
  std::span<const std::uint32_t> neighbours_local(std::size_t i) const noexcept {
    return adjacency().neighbours(i);
  }
  std::vector<Vertex> neighbours(Vertex v) const;
  bool has_edge(Vertex a, Vertex b) const;

  bool has_positions() const noexcept { return !positions_.empty(); }
  bool has_marks() const noexcept { return !marks_.empty(); }
  const std::vector<double>& positions() const noexcept { return positions_; }
  const std::vector<double>& marks() const noexcept { return marks_; }
  double position(Vertex v) const;
  double mark(Vertex v) const;

  // Default boundary margin: window length / 10.
  std::size_t default_margin() const noexcept { return size() / 10; }

  // Same graph with every vertex label v replaced by v + offset.
  WindowedGraph shifted(Vertex offset) const;

  // Edge set and neighbour lists describe the same graph.
  bool adjacency_consistent() const;

  friend bool operator==(const WindowedGraph& a, const WindowedGraph& b);

 private:
  Window window_;
  std::vector<Edge> edges_;
  bool augmented_ = false;
  std::vector<double> positions_;
  std::vector<double> marks_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> targets_;
};

struct GraphStats {
  std::size_t n = 0;
  std::size_t edge_count = 0;
  double empirical_mean_degree = 0.0;
  double delta_hat = 0.0;
};

std::size_t degree(const WindowedGraph& graph, Vertex v);
GraphStats edge_density(const WindowedGraph& graph);
WindowedGraph induced_subgraph(const WindowedGraph& graph, Window interval);

// Mean degree over vertices at distance >= margin from both window ends.
double interior_mean_degree(const WindowedGraph& graph, std::size_t margin);

// Edge-list text format:
//   #window <lo> <hi> augmented=<0|1>
//   #pos <v> <x>      (optional, one per vertex)
//   #mark <v> <u>     (optional, one per vertex)
//   <u> <v>           (one per edge, u < v)
// Other lines starting with '#' are comments. Reals use 17 significant digits.
void write_edge_list(const WindowedGraph& graph, std::ostream& out,
                     std::span<const std::string> comments = {});
WindowedGraph read_edge_list(std::istream& in);
void save_edge_list(const WindowedGraph& graph, const std::string& path,
                    std::span<const std::string> comments = {});
WindowedGraph load_edge_list(const std::string& path);

// Graph on a d-dimensional integer box; sites indexed in row-major order with
// the last coordinate fastest. Immutable after construction.
class LatticeGraph {
 public:
  LatticeGraph() = default;
  LatticeGraph(std::vector<int> dims, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
               std::vector<double> marks = {});

  const std::vector<int>& dims() const noexcept { return dims_; }
  int dimension() const noexcept { return static_cast<int>(dims_.size()); }
  std::size_t site_count() const noexcept { return site_count_; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }
  std::vector<int> coords(std::size_t site) const;
  std::size_t site(std::span<const int> coords) const;
  Adjacency adjacency() const noexcept { return {offsets_, targets_}; }
  std::size_t degree(std::size_t site) const noexcept { return adjacency().degree(site); }
  const std::vector<double>& marks() const noexcept { return marks_; }

 private:
  std::vector<int> dims_;
  std::size_t site_count_ = 0;
  std::vector<double> marks_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> targets_;
};

}  // namespace cpphase
