#include <doctest.h>

#include <cmath>

#include "cpphase/error.hpp"
#include "cpphase/models.hpp"
#include "cpphase/rng.hpp"
#include "cpphase/rwre.hpp"

using namespace cpphase;

TEST_CASE("estimate_omega") {
  CHECK(estimate_omega(path_block(3), 0.0, 200, 1).omega == 0.0);
  const auto e = estimate_omega(path_block(1), 1.0, 10000, 2);
  CHECK(std::abs(e.omega - 0.5) <= 3 * e.se);
  CHECK_THROWS_AS(estimate_omega(path_block(1), 1.0, 99, 2), SpecError);

  // paired seeds: omega non-decreasing in lambda
  const auto g = lrp_generate(LrpSpec{}, Window{0, 200}, 3);
  const auto dec = block_decomposition(g, {});
  std::size_t biggest = 0;
  for (std::size_t k = 1; k < dec.blocks.size(); ++k)
    if (dec.blocks[k].length() > dec.blocks[biggest].length()) biggest = k;
  const auto bp = make_block_problem(g, dec.blocks[biggest]);
  OmegaOptions o;
  double prev = -1;
  for (double lambda : {0.1, 0.3, 0.6, 1.0}) {
    const auto w = estimate_omega(bp, lambda, 2000, 4, o);
    CHECK(w.omega >= prev);
    prev = w.omega;
  }
}

TEST_CASE("omega_lower_bound") {
  CHECK(omega_lower_bound(1, 0, 0.5) == doctest::Approx(std::exp(-1.0)));
  CHECK(omega_lower_bound(3, 2, 0.25) == doctest::Approx(std::exp(-4.0)));
  CHECK_THROWS_AS(omega_lower_bound(0, 0, 0.5), DomainError);
  bool warn = false;
  omega_lower_bound(2, 1, 1.5, &warn);
  CHECK(warn);
}

TEST_CASE("ledrappier_functional on constant environments") {
  const std::vector<double> half(50, 0.5), third(50, 1.0 / 3), two(50, 2.0 / 3);
  const auto h = ledrappier_functional(half);
  CHECK(h.value == 0.0);
  CHECK(h.verdict == RwreVerdict::inconclusive);
  const auto t = ledrappier_functional(third);
  CHECK(t.value == doctest::Approx(std::log(2.0)));
  CHECK(t.verdict == RwreVerdict::recurrent_indicated);
  const auto w = ledrappier_functional(two);
  CHECK(w.value == doctest::Approx(-std::log(2.0)));
  CHECK(w.verdict == RwreVerdict::transient_indicated);
  CHECK_THROWS_AS(ledrappier_functional(std::vector<double>(10, 0.3)), InsufficientData);
}

TEST_CASE("rwre_simulate") {
  const std::vector<double> one(10, 1.0);
  const auto a = rwre_simulate(one, 1000, 1);
  CHECK(std::abs(double(a.returns) - 500.0) <= 1.0);
  CHECK(a.max_position == 1);

  const std::vector<double> half(1, 0.5);
  double returns = 0;
  for (std::uint64_t r = 0; r < 100; ++r) returns += double(rwre_simulate(half, 1'000'000, derive_stream(2, "srw", r)).returns);
  const double ratio = returns / 100 / std::sqrt(1e6);
  CHECK(ratio >= 0.1);
  CHECK(ratio <= 10.0);

  std::uint64_t ret6 = 0, ret4 = 0;
  for (std::uint64_t r = 0; r < 20; ++r) {
    ret6 += rwre_simulate(std::vector<double>(1, 0.6), 100000, derive_stream(3, "paired", r)).returns;
    ret4 += rwre_simulate(std::vector<double>(1, 0.4), 100000, derive_stream(3, "paired", r)).returns;
  }
  CHECK(ret6 > ret4);
}

TEST_CASE("pipeline_verdict") {
  const auto path = WindowedGraph::path(Window{0, 400});
  const auto lo = pipeline_verdict(path, 0.05, 2000, 1);
  CHECK(lo.ledrappier.verdict == RwreVerdict::recurrent_indicated);
  CHECK(lo.bound_violations == 0);
  const auto hi = pipeline_verdict(path, 10.0, 2000, 2);
  CHECK(hi.ledrappier.verdict == RwreVerdict::transient_indicated);
  CHECK(hi.ledrappier.value == doctest::Approx(-std::log(10.0)).epsilon(0.1));

  CliqueChainSpec cs;
  cs.size.kind = CliqueSizeLaw::Kind::pareto;
  cs.size.alpha = 3.0;
  const auto cc = clique_chain_generate(cs, Window{0, 300}, 3);
  const auto r = pipeline_verdict(cc.graph, 0.05, 400, 4);
  CHECK(r.ledrappier.verdict == RwreVerdict::recurrent_indicated);
}

TEST_CASE("pipeline cross-validation against eta trajectories") {
  const auto g = lrp_generate(LrpSpec{}, Window{0, 600}, 5);
  PipelineOptions o;
  o.cross_validate = true;
  o.cv_runs = 400;
  o.cv_horizon = 200;
  const auto r = pipeline_verdict(g, 0.5, 1000, 6, o);
  REQUIRE(r.cross_validation);
  const auto& cv = *r.cross_validation;
  REQUIRE(cv.blocks_compared > 0);
  CHECK(double(cv.blocks_agreeing) >= 0.9 * double(cv.blocks_compared));
}
