#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cpphase/error.hpp"
#include "cpphase/graph.hpp"

namespace cpphase {

void write_edge_list(const WindowedGraph& graph, std::ostream& out,
                     std::span<const std::string> comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "#window " << graph.lo() << ' ' << graph.hi() << " augmented=" << (graph.augmented() ? 1 : 0)
      << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < graph.positions().size(); ++i)
    out << "#pos " << graph.global(i) << ' ' << graph.positions()[i] << '\n';
  for (std::size_t i = 0; i < graph.marks().size(); ++i)
    out << "#mark " << graph.global(i) << ' ' << graph.marks()[i] << '\n';
  for (const auto& e : graph.edges()) out << e.u << ' ' << e.v << '\n';
}

WindowedGraph read_edge_list(std::istream& in) {
  bool have_window = false;
  Window window;
  bool augmented = false;
  std::vector<std::pair<Vertex, double>> pos, marks;
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw IoError("edge list line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string key;
      ls >> key;
      if (key == "#window") {
        std::string aug;
        if (!(ls >> window.lo >> window.hi >> aug)) fail("malformed #window header");
        if (aug == "augmented=1") augmented = true;
        else if (aug == "augmented=0") augmented = false;
        else fail("malformed augmented flag");
        have_window = true;
      } else if (key == "#pos" || key == "#mark") {
        Vertex v;
        std::string value;
        if (!(ls >> v >> value)) fail("malformed " + key + " line");
        // strtod keeps every digit that was written.
        const double x = std::strtod(value.c_str(), nullptr);
        (key == "#pos" ? pos : marks).emplace_back(v, x);
      }
      continue;
    }
    Edge e;
    if (!(ls >> e.u >> e.v)) fail("malformed edge");
    if (e.u >= e.v) fail("edge endpoints must satisfy u < v");
    edges.push_back(e);
  }
  if (!have_window) throw IoError("edge list has no #window header");
  auto dense = [&](std::vector<std::pair<Vertex, double>>& items, const char* what) {
    std::vector<double> out;
    if (items.empty()) return out;
    if (items.size() != window.length())
      throw IoError(std::string("edge list: incomplete ") + what + " table");
    out.assign(window.length(), 0.0);
    std::vector<bool> seen(window.length(), false);
    for (auto& [v, x] : items) {
      if (!window.contains(v)) throw IoError(std::string("edge list: ") + what + " outside window");
      const auto i = static_cast<std::size_t>(v - window.lo);
      if (seen[i]) throw IoError(std::string("edge list: duplicate ") + what);
      seen[i] = true;
      out[i] = x;
    }
    return out;
  };
  auto positions = dense(pos, "position");
  auto mark_values = dense(marks, "mark");
  return WindowedGraph(window, std::move(edges), augmented, std::move(positions),
                       std::move(mark_values));
}

void save_edge_list(const WindowedGraph& graph, const std::string& path,
                    std::span<const std::string> comments) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_edge_list(graph, out, comments);
  if (!out) throw IoError("write failed: " + path);
}

WindowedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return read_edge_list(in);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace cpphase
