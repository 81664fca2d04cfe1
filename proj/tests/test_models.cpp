#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cpphase/cuts.hpp"
#include "cpphase/error.hpp"
#include "cpphase/graph.hpp"
#include "cpphase/models.hpp"
#include "cpphase/rng.hpp"

using namespace cpphase;

TEST_CASE("lrp_generate") {
  const auto g = lrp_generate(LrpSpec{}, Window{-100, 100}, 5);
  CHECK(g.augmented());
  for (Vertex z = -99; z <= 100; ++z) CHECK(g.has_edge(z - 1, z));

  LrpSpec nn;
  nn.phi = ConnectionFunction::from_table({1.0});
  CHECK(lrp_generate(nn, Window{-10, 10}, 3) == WindowedGraph::path(Window{-10, 10}));

  CHECK(lrp_generate(LrpSpec{}, Window{0, 999}, 8) == lrp_generate(LrpSpec{}, Window{0, 999}, 8));

  LrpSpec bad;
  bad.phi = ConnectionFunction::from_table({1.0, 1.5});
  CHECK_THROWS_AS(lrp_generate(bad, Window{0, 9}, 1), SpecError);
}

TEST_CASE("lrp edge frequency per distance") {
  // About 1e5 pairs per distance in one window, well beyond 1e4 samples.
  const std::size_t n = 100000;
  const auto g = lrp_generate(LrpSpec{}, Window::of_length(n), derive_stream(3, "freq", 0));
  std::vector<std::size_t> hits(11, 0);
  for (const auto& e : g.edges())
    if (e.length() <= 10) ++hits[static_cast<std::size_t>(e.length())];
  for (std::uint64_t k = 2; k <= 10; ++k) {
    const double pairs = static_cast<double>(n - k);
    const double phi = std::pow(double(k), -2.5);
    const double se = std::sqrt(phi * (1 - phi) / pairs);
    CHECK(std::abs(hits[k] / pairs - phi) <= 3 * se);
  }
}

TEST_CASE("gilbert_generate") {
  std::vector<double> pos, r3, r10;
  for (int i = 0; i < 21; ++i) {
    pos.push_back(i);
    r3.push_back(0.3);
    r10.push_back(1.0);
  }
  CHECK(gilbert_build(Window{0, 20}, pos, r3).edges() == WindowedGraph::path(Window{0, 20}).edges());
  const auto g = gilbert_build(Window{0, 20}, pos, r10);
  for (Vertex v = 2; v <= 18; ++v) CHECK(degree(g, v) == 4);
  CHECK_THROWS(gilbert_build(Window{0, 2}, {0.0, 0.0, 1.0}, {0.1, 0.1, 0.1}));

  GilbertSpec s;
  s.points.kind = PointProcess::Kind::poisson;
  s.radius.alpha = 2.0;
  std::size_t with_cuts = 0;
  for (std::uint64_t w = 0; w < 100; ++w) {
    const auto h = gilbert_generate(s, Window{0, 999}, derive_stream(4, "gilbert", w));
    with_cuts += !find_cut_points(h, 2, 100).empty();
  }
  CHECK(with_cuts > 90);
}

TEST_CASE("gilbert monotone in the radii") {
  GilbertSpec s;
  const auto pos = sample_points(s.points, Window{0, 299}, 1);
  std::vector<double> r, r2;
  StreamRng rng(derive_stream(1, "radii", 0));
  for (std::size_t i = 0; i < pos.size(); ++i) {
    r.push_back(s.radius.sample(rng.uniform()));
    r2.push_back(r.back() * 1.5);
  }
  const auto small = gilbert_build(Window{0, 299}, pos, r);
  const auto big = gilbert_build(Window{0, 299}, pos, r2);
  for (const auto& e : small.edges()) CHECK(big.has_edge(e.u, e.v));
}

TEST_CASE("wdrcm_generate") {
  std::vector<double> pos, half, ones;
  for (int i = 0; i < 11; ++i) {
    pos.push_back(i);
    half.push_back(0.5);
    ones.push_back(1.0);
  }
  // gamma -> 0: kernel 1{|x| <= 1}
  const auto g0 = wdrcm_build(Window{0, 10}, pos, half, WdrcmKernel::product(1e-9), 1);
  CHECK(g0.edges() == WindowedGraph::path(Window{0, 10}).edges());
  // 0.25^-0.4 ~ 1.74 < 2: no edge at distance 2
  const auto g4 = wdrcm_build(Window{0, 10}, pos, half, WdrcmKernel::product(0.4), 1);
  CHECK_FALSE(g4.has_edge(0, 2));
  // marks 1: threshold 1
  const auto g1 = wdrcm_build(Window{0, 10}, pos, ones, WdrcmKernel::product(0.4), 1);
  CHECK(g1.edges() == WindowedGraph::path(Window{0, 10}).edges());
  CHECK(wdrcm_generate(WdrcmSpec{}, Window{0, 500}, 2).augmented());
  CHECK_NOTHROW(validate_kernel(WdrcmKernel::product(0.4)));
}

TEST_CASE("boolean_lattice_generate") {
  const auto ones = std::vector<double>(21 * 21, 1.0);
  const auto g = boolean_lattice_build({21, 21}, ones, 0.75);
  const std::array<int, 2> c{10, 10};
  // |z - v| <= 2: 12 neighbours
  CHECK(g.degree(g.site(c)) == 12);
  const std::array<int, 2> a{0, 0}, b{0, 3};
  const auto nb = g.adjacency().neighbours(g.site(a));
  CHECK(std::find(nb.begin(), nb.end(), g.site(b)) == nb.end());

  const int side = 101;
  std::vector<double> marks(side * side, 1.0);
  const std::array<int, 2> mid{50, 50};
  auto planted = boolean_lattice_build({side, side}, marks, 0.75);
  marks[planted.site(mid)] = 1e-4;
  planted = boolean_lattice_build({side, side}, marks, 0.75);
  // radius 10^1.5 + 1 around the planted site
  const double rad = std::pow(10.0, 1.5) + 1.0;
  CHECK(std::abs(double(planted.degree(planted.site(mid))) - std::numbers::pi * rad * rad) /
            (std::numbers::pi * rad * rad) <
        0.05);

  const auto r = boolean_lattice_generate(BooleanLatticeSpec{}, {30, 30}, 4);
  for (std::size_t s = 0; s < r.site_count(); ++s) {
    const auto xy = r.coords(s);
    if (xy[0] > 0 && xy[0] < 29 && xy[1] > 0 && xy[1] < 29) CHECK(r.degree(s) >= 4);
  }
}

TEST_CASE("clique_chain_generate") {
  CliqueChainSpec one;
  CHECK(clique_chain_generate(one, Window{0, 20}, 1).graph == WindowedGraph::path(Window{0, 20}));
  CliqueChainSpec three;
  three.size.value = 3;
  const auto cc = clique_chain_generate(three, Window{0, 20}, 1);
  for (std::size_t n = 1; n + 1 < cc.roots.size(); ++n) CHECK(degree(cc.graph, cc.roots[n]) == 4);
}

TEST_CASE("lrp_condition_check") {
  const auto r25 = lrp_condition_check(LrpSpec{}, 1 << 16, 0.0);
  CHECK(r25.hypothesis == Verdict::satisfied);
  // zeta(1.5) = 2.6123753...
  CHECK(r25.first_moment.partial <= 2.6123754);
  CHECK(r25.first_moment.partial + r25.first_moment.tail_bound >= 2.6123753);

  const auto r2 = lrp_condition_check(LrpSpec{ConnectionFunction::power_law(2.0), false}, 1 << 16, 1e-6);
  CHECK(r2.first_moment.verdict == Verdict::violated);
  CHECK(r2.sparsity.verdict == Verdict::satisfied);

  const auto r15 = lrp_condition_check(LrpSpec{ConnectionFunction::power_law(1.5), false}, 1 << 16, 1e-6);
  CHECK(r15.sparsity.verdict == Verdict::satisfied);
  CHECK(r15.hypothesis == Verdict::violated);

  LrpSpec open;
  open.phi = ConnectionFunction::from_table({1.0, 0.5}, false);
  CHECK(lrp_condition_check(open, 16, 1e-6).hypothesis == Verdict::inconclusive);
}

TEST_CASE("wdrcm_cut_condition") {
  WdrcmSpec s;
  s.gamma = 0.4;
  s.kernel = WdrcmKernel::product(0.4);
  CHECK(wdrcm_cut_condition(s, 100, 1e-8).verdict == Verdict::satisfied);
  s.gamma = 0.6;
  s.kernel = WdrcmKernel::product(0.6);
  CHECK(wdrcm_cut_condition(s, 100, 1e-8).verdict == Verdict::violated);
  s.kernel = WdrcmKernel::zero();
  const auto z = wdrcm_cut_condition(s, 100, 1e-8);
  CHECK(z.verdict == Verdict::satisfied);
  CHECK(z.partial == 0.0);
}

TEST_CASE("lrp_cut_probability") {
  LrpSpec nn;
  nn.phi = ConnectionFunction::from_table({1.0, 0.0, 0.0});
  const auto one = lrp_cut_probability(nn, 100);
  CHECK(one.lo == 1.0);
  CHECK(one.hi == 1.0);
  LrpSpec two;
  two.phi = ConnectionFunction::from_table({1.0, 1.0});
  const auto zero = lrp_cut_probability(two, 100);
  CHECK(zero.hi == 0.0);
  CHECK(zero.exact);

  // prod_{k>=2} (1 - k^-2.5)^k, regression constant of the truncated product
  const auto p = lrp_cut_probability(LrpSpec{}, 10000);
  CHECK(p.lo > 0.0);
  CHECK(p.hi < 1.0);
  CHECK(p.lo <= p.hi);
  CHECK(p.hi == doctest::Approx(0.194337).epsilon(1e-4));
}
