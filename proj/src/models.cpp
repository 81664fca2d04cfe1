#include "cpphase/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cpphase/error.hpp"
#include "cpphase/rng.hpp"

namespace cpphase {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Zig-zag map Z -> N so vertex labels can index streams.
constexpr std::uint64_t zigzag(Vertex v) noexcept {
  return v >= 0 ? static_cast<std::uint64_t>(v) * 2 : static_cast<std::uint64_t>(-(v + 1)) * 2 + 1;
}

double per_index_uniform(std::uint64_t seed, std::string_view tag, Vertex v) {
  StreamRng rng(derive_stream(seed, tag, zigzag(v)));
  return rng.uniform();
}

}  // namespace

ConnectionFunction ConnectionFunction::power_law(double delta) {
  ConnectionFunction f;
  f.delta = delta;
  return f;
}

ConnectionFunction ConnectionFunction::from_table(std::vector<double> table, bool tail_known) {
  ConnectionFunction f;
  f.table = std::move(table);
  f.table_tail_known = tail_known;
  return f;
}

double ConnectionFunction::operator()(std::uint64_t k) const {
  if (k == 0) return 0.0;
  if (delta) return std::pow(static_cast<double>(k), -*delta);
  return k <= table.size() ? table[k - 1] : 0.0;
}

void ConnectionFunction::validate() const {
  if (delta) {
    if (!(*delta > 1.0)) throw SpecError("LRP exponent delta must exceed 1");
    return;
  }
  if (table.empty()) throw SpecError("LRP connection function needs delta or a table");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!(table[i] >= 0.0 && table[i] <= 1.0))
      throw SpecError("phi(" + std::to_string(i + 1) + ") outside [0,1]");
  }
}

double SpacingLaw::sample(double u) const {
  switch (kind) {
    case Kind::constant: return a;
    case Kind::uniform: return a + (b - a) * u;
  }
  return a;
}

double SpacingLaw::mean() const { return kind == Kind::constant ? a : 0.5 * (a + b); }

double RadiusLaw::sample(double u) const {
  switch (kind) {
    case Kind::pareto: return scale * std::pow(u, -1.0 / alpha);
    case Kind::constant: return value;
    case Kind::table: {
      double acc = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        acc += probs[i];
        if (u <= acc) return values[i];
      }
      return values.back();
    }
  }
  return value;
}

double RadiusLaw::mean() const {
  switch (kind) {
    case Kind::pareto: return alpha > 1.0 ? scale * alpha / (alpha - 1.0) : kInf;
    case Kind::constant: return value;
    case Kind::table: {
      double m = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * probs[i];
      return m;
    }
  }
  return value;
}

void RadiusLaw::validate() const {
  switch (kind) {
    case Kind::pareto:
      if (!(alpha > 0.0) || !(scale > 0.0)) throw SpecError("Pareto radius law needs alpha, scale > 0");
      break;
    case Kind::constant:
      if (!(value >= 0.0)) throw SpecError("radius must be non-negative");
      break;
    case Kind::table: {
      if (values.empty() || values.size() != probs.size()) throw SpecError("radius table malformed");
      double total = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0)) throw SpecError("radius table must be supported on [0,inf)");
        if (!(probs[i] >= 0.0 && probs[i] <= 1.0)) throw SpecError("radius table probability outside [0,1]");
        total += probs[i];
      }
      if (std::abs(total - 1.0) > 1e-9) throw SpecError("radius table probabilities must sum to 1");
      break;
    }
  }
}

WdrcmKernel WdrcmKernel::product(double gamma) {
  WdrcmKernel k;
  k.name = "product";
  k.prob = [gamma](double u, double v, double r) {
    return r <= std::pow(u, -gamma) * std::pow(v, -gamma) ? 1.0 : 0.0;
  };
  k.range = [gamma](double u, double v) { return std::pow(u, -gamma) * std::pow(v, -gamma); };
  return k;
}

WdrcmKernel WdrcmKernel::zero() {
  WdrcmKernel k;
  k.name = "zero";
  k.prob = [](double, double, double) { return 0.0; };
  k.range = [](double, double) { return 0.0; };
  return k;
}

void validate_kernel(const WdrcmKernel& kernel, int grid) {
  if (!kernel.prob) throw SpecError("WDRCM kernel has no connection function");
  std::vector<double> marks(static_cast<std::size_t>(grid));
  std::vector<double> dists(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    marks[static_cast<std::size_t>(i)] = (i + 0.5) / grid;
    dists[static_cast<std::size_t>(i)] = std::pow(2.0, i * 0.5);
  }
  auto at = [&](int a, int b, int c) {
    return kernel.prob(marks[static_cast<std::size_t>(a)], marks[static_cast<std::size_t>(b)],
                       dists[static_cast<std::size_t>(c)]);
  };
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      for (int c = 0; c < grid; ++c) {
        const double p = at(a, b, c);
        if (!(p >= 0.0 && p <= 1.0)) throw SpecError("WDRCM kernel value outside [0,1]");
        if (p != at(b, a, c)) throw SpecError("WDRCM kernel is not symmetric in the marks");
        if (a + 1 < grid && at(a + 1, b, c) > p) throw SpecError("WDRCM kernel increases in a mark");
        if (c + 1 < grid && at(a, b, c + 1) > p) throw SpecError("WDRCM kernel increases in distance");
      }
    }
  }
}

int CliqueSizeLaw::sample(double u) const {
  switch (kind) {
    case Kind::constant: return value;
    case Kind::pareto: {
      const double k = std::ceil(std::pow(u, -1.0 / alpha));
      return static_cast<int>(std::min<double>(k, cap));
    }
    case Kind::table: {
      double acc = 0.0;
      for (std::size_t i = 0; i < sizes.size(); ++i) {
        acc += probs[i];
        if (u <= acc) return sizes[i];
      }
      return sizes.back();
    }
  }
  return value;
}

bool CliqueSizeLaw::finite_second_moment() const {
  return kind != Kind::pareto || alpha > 2.0;
}

void CliqueSizeLaw::validate() const {
  switch (kind) {
    case Kind::constant:
      if (value < 1) throw SpecError("clique size must be >= 1");
      break;
    case Kind::pareto:
      if (!(alpha > 0.0)) throw SpecError("clique-size Pareto exponent must be positive");
      break;
    case Kind::table: {
      if (sizes.empty() || sizes.size() != probs.size()) throw SpecError("clique-size table malformed");
      double total = 0.0;
      for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1) throw SpecError("clique sizes must be >= 1");
        total += probs[i];
      }
      if (std::abs(total - 1.0) > 1e-9) throw SpecError("clique-size probabilities must sum to 1");
      break;
    }
  }
}

std::string model_name(const ModelSpec& spec) {
  static constexpr const char* names[] = {"lrp", "gilbert", "wdrcm", "boolean", "clique"};
  return names[spec.index()];
}

namespace {

void validate_points(const PointProcess& p) {
  if (p.kind == PointProcess::Kind::renewal) {
    const auto& s = p.spacing;
    if (s.kind == SpacingLaw::Kind::constant && !(s.a >= 0.0))
      throw SpecError("renewal spacing must be non-negative");
    if (s.kind == SpacingLaw::Kind::uniform && !(s.a >= 0.0 && s.b >= s.a))
      throw SpecError("renewal spacing law needs 0 <= a <= b");
  }
}

}  // namespace

void validate(const ModelSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LrpSpec>) {
          s.phi.validate();
        } else if constexpr (std::is_same_v<T, GilbertSpec>) {
          validate_points(s.points);
          s.radius.validate();
        } else if constexpr (std::is_same_v<T, WdrcmSpec>) {
          if (!(s.gamma > 0.0 && s.gamma < 1.0)) throw SpecError("WDRCM gamma must lie in (0,1)");
          if (!(s.mu > 0.0)) throw SpecError("WDRCM truncation exponent mu must be positive");
          validate_points(s.points);
          validate_kernel(s.kernel);
        } else if constexpr (std::is_same_v<T, BooleanLatticeSpec>) {
          if (s.dimension < 2) throw SpecError("Boolean lattice dimension must be >= 2");
          if (!(s.gamma > 0.0 && s.gamma < 1.0)) throw SpecError("Boolean lattice gamma must lie in (0,1)");
        } else {
          s.size.validate();
        }
      },
      spec);
}

std::uint64_t lrp_cutoff_distance(const LrpSpec& spec, std::size_t n) {
  if (n < 2) return 1;
  const std::uint64_t max_k = n - 1;
  if (!spec.phi.delta) return std::min<std::uint64_t>(max_k, spec.phi.table.size());
  // phi(k) (n-k) is decreasing in k for a power law.
  for (std::uint64_t k = 1; k <= max_k; ++k) {
    if (spec.phi(k) * static_cast<double>(n - k) < 1e-12) return k - 1;
  }
  return max_k;
}

double lrp_truncation_bias(const LrpSpec& spec, std::size_t n) {
  double bias = 0.0;
  for (std::uint64_t k = lrp_cutoff_distance(spec, n) + 1; k < n; ++k)
    bias += spec.phi(k) * static_cast<double>(n - k);
  return bias;
}

WindowedGraph lrp_generate(const LrpSpec& spec, Window window, std::uint64_t seed) {
  spec.phi.validate();
  const std::size_t n = window.length();
  if (n < 2) throw DomainError("LRP window length must be >= 2");
  StreamRng rng(derive_stream(seed, "lrp", 0));
  std::vector<Edge> edges;
  const std::uint64_t cutoff = lrp_cutoff_distance(spec, n);
  for (std::uint64_t k = 1; k <= cutoff; ++k) {
    const double p = spec.phi(k);
    if (p <= 0.0) continue;
    const std::uint64_t pairs = n - k;
    const auto dk = static_cast<Vertex>(k);
    if (p >= 1.0) {
      for (std::uint64_t x = 0; x < pairs; ++x) {
        const Vertex a = window.lo + static_cast<Vertex>(x);
        edges.push_back({a, a + dk});
      }
      continue;
    }
    // Geometric skipping over the pairs at distance k.
    const double log_q = std::log1p(-p);
    std::uint64_t pos = 0;
    while (true) {
      const double skip = std::floor(std::log(rng.uniform()) / log_q);
      if (skip >= static_cast<double>(pairs - pos)) break;
      pos += static_cast<std::uint64_t>(skip);
      const Vertex a = window.lo + static_cast<Vertex>(pos);
      edges.push_back({a, a + dk});
      if (++pos >= pairs) break;
    }
  }
  const bool augmented = spec.phi(1) >= 1.0 || spec.augment;
  if (spec.augment) {
    for (Vertex v = window.lo + 1; v <= window.hi; ++v) edges.push_back({v - 1, v});
  }
  return WindowedGraph(window, std::move(edges), augmented);
}

std::vector<double> sample_points(const PointProcess& points, Window window, std::uint64_t seed) {
  const std::size_t n = window.length();
  std::vector<double> x(n);
  if (points.kind == PointProcess::Kind::unit_lattice) {
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(window.lo + static_cast<Vertex>(i));
    return x;
  }
  // Spacing S_i separates points i-1 and i.
  auto spacing = [&](Vertex i) {
    const double u = per_index_uniform(seed, "spacing", i);
    if (points.kind == PointProcess::Kind::poisson) return -std::log(u);
    return points.spacing.sample(u);
  };
  auto position_of = [&](Vertex target) {
    double pos = 0.0;
    if (target > 0) {
      for (Vertex i = 1; i <= target; ++i) pos += spacing(i);
    } else {
      for (Vertex i = 0; i > target; --i) pos -= spacing(i);
    }
    return pos;
  };
  x[0] = position_of(window.lo);
  for (std::size_t i = 1; i < n; ++i) {
    const Vertex v = window.lo + static_cast<Vertex>(i);
    x[i] = x[i - 1] + spacing(v);
    if (!(x[i] > x[i - 1]))
      throw GenerationError("point process produced non-increasing positions (zero spacing)");
  }
  return x;
}

WindowedGraph gilbert_build(Window window, std::vector<double> positions, std::vector<double> radii) {
  const std::size_t n = window.length();
  if (positions.size() != n || radii.size() != n) throw DomainError("positions/radii must cover the window");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(positions[i] > positions[i - 1]))
      throw GenerationError("Gilbert positions must be strictly increasing");
  }
  std::vector<Edge> edges;
  auto v = [&](std::size_t i) { return window.lo + static_cast<Vertex>(i); };
  for (std::size_t i = 1; i < n; ++i) edges.push_back({v(i - 1), v(i)});
  // The endpoint with the larger radius (smaller index on ties) owns the pair;
  // it only has to look within twice its own radius.
  for (std::size_t i = 0; i < n; ++i) {
    const double r = radii[i];
    const double reach = 2.0 * r;
    for (std::size_t j = i + 1; j < n && positions[j] - positions[i] <= reach; ++j) {
      if (radii[j] <= r && positions[j] - positions[i] <= r + radii[j]) edges.push_back({v(i), v(j)});
    }
    for (std::size_t j = i; j-- > 0 && positions[i] - positions[j] <= reach;) {
      if (radii[j] < r && positions[i] - positions[j] <= r + radii[j]) edges.push_back({v(j), v(i)});
    }
  }
  return WindowedGraph(window, std::move(edges), true, std::move(positions), std::move(radii));
}

WindowedGraph gilbert_generate(const GilbertSpec& spec, Window window, std::uint64_t seed) {
  validate(ModelSpec{spec});
  auto positions = sample_points(spec.points, window, seed);
  std::vector<double> radii(window.length());
  for (std::size_t i = 0; i < radii.size(); ++i)
    radii[i] = spec.radius.sample(per_index_uniform(seed, "radius", window.lo + static_cast<Vertex>(i)));
  return gilbert_build(window, std::move(positions), std::move(radii));
}

WindowedGraph wdrcm_build(Window window, std::vector<double> positions, std::vector<double> marks,
                          const WdrcmKernel& kernel, std::uint64_t seed) {
  const std::size_t n = window.length();
  if (positions.size() != n || marks.size() != n) throw DomainError("positions/marks must cover the window");
  std::vector<Edge> edges;
  auto v = [&](std::size_t i) { return window.lo + static_cast<Vertex>(i); };
  for (std::size_t i = 1; i < n; ++i) edges.push_back({v(i - 1), v(i)});
  auto consider = [&](std::size_t a, std::size_t b) {
    const double p = kernel.prob(marks[a], marks[b], std::abs(positions[a] - positions[b]));
    if (p <= 0.0) return;
    if (p < 1.0) {
      const std::size_t lo = std::min(a, b);
      const std::size_t hi = std::max(a, b);
      StreamRng rng(derive_stream(derive_stream(seed, "wdrcm-edge", zigzag(v(lo))), zigzag(v(hi))));
      if (rng.uniform() >= p) return;
    }
    edges.push_back({v(std::min(a, b)), v(std::max(a, b))});
  };
  // The endpoint with the smaller mark owns the pair; by monotonicity its
  // support bound at (u_i, u_i) covers every partner.
  for (std::size_t i = 0; i < n; ++i) {
    const double u = marks[i];
    const double reach = kernel.range ? kernel.range(u, u) : kInf;
    for (std::size_t j = i + 1; j < n && positions[j] - positions[i] <= reach; ++j) {
      if (marks[j] >= u) consider(i, j);
    }
    for (std::size_t j = i; j-- > 0 && positions[i] - positions[j] <= reach;) {
      if (marks[j] > u) consider(i, j);
    }
  }
  return WindowedGraph(window, std::move(edges), true, std::move(positions), std::move(marks));
}

WindowedGraph wdrcm_generate(const WdrcmSpec& spec, Window window, std::uint64_t seed) {
  validate(ModelSpec{spec});
  auto positions = sample_points(spec.points, window, seed);
  std::vector<double> marks(window.length());
  for (std::size_t i = 0; i < marks.size(); ++i)
    marks[i] = per_index_uniform(seed, "mark", window.lo + static_cast<Vertex>(i));
  return wdrcm_build(window, std::move(positions), std::move(marks), spec.kernel, seed);
}

LatticeGraph boolean_lattice_build(std::vector<int> box, std::vector<double> marks, double gamma) {
  const int d = static_cast<int>(box.size());
  if (d < 1) throw DomainError("lattice box needs a dimension");
  std::size_t sites = 1;
  for (int s : box) {
    if (s <= 0) throw DomainError("lattice box must be nonempty");
    sites *= static_cast<std::size_t>(s);
  }
  if (marks.size() != sites) throw DomainError("marks must cover the box");
  std::vector<double> radius(sites);
  for (std::size_t s = 0; s < sites; ++s) radius[s] = std::pow(marks[s], -gamma / d);

  std::vector<std::size_t> stride(static_cast<std::size_t>(d));
  stride[static_cast<std::size_t>(d - 1)] = 1;
  for (int k = d - 1; k-- > 0;)
    stride[static_cast<std::size_t>(k)] = stride[static_cast<std::size_t>(k + 1)] * static_cast<std::size_t>(box[static_cast<std::size_t>(k + 1)]);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<int> c(static_cast<std::size_t>(d)), off(static_cast<std::size_t>(d)), lo(static_cast<std::size_t>(d)),
      hi(static_cast<std::size_t>(d));
  for (std::size_t s = 0; s < sites; ++s) {
    std::size_t rem = s;
    for (int k = d; k-- > 0;) {
      c[static_cast<std::size_t>(k)] = static_cast<int>(rem % static_cast<std::size_t>(box[static_cast<std::size_t>(k)]));
      rem /= static_cast<std::size_t>(box[static_cast<std::size_t>(k)]);
    }
    const double r = radius[s];
    const int reach = static_cast<int>(std::floor(2.0 * r));
    for (std::size_t k = 0; k < static_cast<std::size_t>(d); ++k) {
      lo[k] = std::max(0, c[k] - reach);
      hi[k] = std::min(box[k] - 1, c[k] + reach);
      off[k] = lo[k];
    }
    // Odometer over the scan box. The site with the larger radius (smaller
    // index on ties) owns the pair.
    while (true) {
      std::size_t t = 0;
      double dist2 = 0.0;
      for (std::size_t k = 0; k < static_cast<std::size_t>(d); ++k) {
        t += static_cast<std::size_t>(off[k]) * stride[k];
        const double dk = off[k] - c[k];
        dist2 += dk * dk;
      }
      if (t != s) {
        const double rt = radius[t];
        const bool owner = rt < r || (rt == r && t > s);
        const double sum = r + rt;
        if (owner && dist2 <= sum * sum)
          edges.emplace_back(static_cast<std::uint32_t>(std::min(s, t)), static_cast<std::uint32_t>(std::max(s, t)));
      }
      std::size_t k = static_cast<std::size_t>(d);
      while (k-- > 0) {
        if (++off[k] <= hi[k]) break;
        off[k] = lo[k];
      }
      if (k == static_cast<std::size_t>(-1)) break;
    }
  }
  return LatticeGraph(std::move(box), edges, std::move(marks));
}

LatticeGraph boolean_lattice_generate(const BooleanLatticeSpec& spec, std::vector<int> box,
                                      std::uint64_t seed) {
  validate(ModelSpec{spec});
  if (static_cast<int>(box.size()) != spec.dimension)
    throw SpecError("box dimension does not match the model dimension");
  std::size_t sites = 1;
  for (int s : box) {
    if (s <= 0) throw DomainError("lattice box must be nonempty");
    sites *= static_cast<std::size_t>(s);
  }
  std::vector<double> marks(sites);
  StreamRng rng(derive_stream(seed, "lattice-marks", 0));
  for (auto& u : marks) u = rng.uniform();
  return boolean_lattice_build(std::move(box), std::move(marks), spec.gamma);
}

CliqueChain clique_chain_generate(const CliqueChainSpec& spec, Window backbone, std::uint64_t seed) {
  spec.size.validate();
  const std::size_t n = backbone.length();
  if (n == 0) throw DomainError("empty backbone");
  CliqueChain out;
  out.clique_sizes.resize(n);
  for (std::size_t b = 0; b < n; ++b)
    out.clique_sizes[b] = spec.size.sample(per_index_uniform(seed, "clique", backbone.lo + static_cast<Vertex>(b)));
  std::vector<Edge> edges;
  Vertex next = backbone.lo;
  for (std::size_t b = 0; b < n; ++b) {
    const Vertex root = next;
    out.roots.push_back(root);
    const int k = out.clique_sizes[b];
    for (Vertex a = root; a < root + k; ++a) {
      for (Vertex c = a + 1; c < root + k; ++c) edges.push_back({a, c});
    }
    if (b > 0) edges.push_back({out.roots[b - 1], root});
    next = root + k;
  }
  // Only a chain of singleton cliques contains every nearest-neighbour link.
  const bool augmented = std::all_of(out.clique_sizes.begin(), out.clique_sizes.end(), [](int k) { return k == 1; });
  out.graph = WindowedGraph({backbone.lo, next - 1}, std::move(edges), augmented);
  return out;
}

WindowedGraph generate(const ModelSpec& spec, Window window, std::uint64_t seed) {
  return std::visit(
      [&](const auto& s) -> WindowedGraph {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LrpSpec>) return lrp_generate(s, window, seed);
        else if constexpr (std::is_same_v<T, GilbertSpec>) return gilbert_generate(s, window, seed);
        else if constexpr (std::is_same_v<T, WdrcmSpec>) return wdrcm_generate(s, window, seed);
        else if constexpr (std::is_same_v<T, CliqueChainSpec>) return clique_chain_generate(s, window, seed).graph;
        else throw SpecError("the Boolean lattice model lives on Z^d; use boolean_lattice_generate");
      },
      spec);
}

WindowedGraph star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.push_back({0, static_cast<Vertex>(i)});
  return WindowedGraph({0, static_cast<Vertex>(leaves)}, std::move(edges), leaves <= 1);
}

}  // namespace cpphase
