#include <doctest.h>

#include <cmath>
#include <limits>

#include "cpphase/error.hpp"
#include "cpphase/models.hpp"
#include "cpphase/renorm.hpp"

using namespace cpphase;

TEST_CASE("infection_path_exponent") {
  const auto e = infection_path_exponent(1e6, 2, 0.75, 0.1, 0.5, 1.0);
  const double direct = std::pow(1e6, 0.65) - std::pow(2.0, 1.5) * std::log(1.5 / 0.5) * std::pow(1e6, 0.5);
  CHECK(e.value == doctest::Approx(direct).epsilon(1e-12));
  CHECK(e.value == doctest::Approx(4836).epsilon(1e-3));
  CHECK(e.positive);
  CHECK(e.eventually_positive);
  REQUIRE(e.minimal_L);
  const double m = std::round(std::sqrt(*e.minimal_L));
  CHECK(infection_path_exponent(m * m, 2, 0.75, 0.1, 0.5, 1.0).value > 0);
  CHECK(infection_path_exponent((m - 1) * (m - 1), 2, 0.75, 0.1, 0.5, 1.0).value <= 0);

  const auto neg = infection_path_exponent(1e6, 2, 0.5, 0.1, 0.5, 1.0);
  CHECK_FALSE(neg.eventually_positive);
  CHECK_FALSE(neg.minimal_L);

  const double inf = std::numeric_limits<double>::infinity();
  CHECK(infection_path_exponent(1e4, 2, 0.75, 0.1, inf, 2.0).value == doctest::Approx(2.0 * std::pow(1e4, 0.65)));
}

TEST_CASE("good_box_field") {
  const auto ones = boolean_lattice_build({40, 40}, std::vector<double>(1600, 1.0), 0.75);
  const auto f = good_box_field(ones, 100, 0.75, 0.1);
  CHECK(f.boxes.size() == 16);
  for (const auto& b : f.boxes) {
    CHECK(b.max_degree <= 12);
    CHECK_FALSE(b.good);
  }
  CHECK_THROWS_AS(good_box_field(ones, 2500, 0.75, 0.1), SpecError);
  CHECK_THROWS_AS(good_box_field(ones, 49, 0.75, 0.1), SpecError);

  std::vector<double> marks(1600, 1.0);
  marks[20 * 40 + 20] = 1e-12;
  const auto planted = boolean_lattice_build({40, 40}, marks, 0.75);
  const auto pf = good_box_field(planted, 1600, 0.75, 0.1);
  REQUIRE(pf.boxes.size() == 1);
  CHECK(pf.boxes[0].good);
}

TEST_CASE("good-box fraction matches the per-site oracle") {
  // A site is good when its in-box degree reaches L^{gamma-eps}; with radius
  // r = u^{-gamma/d} the in-box degree is about the count of box sites within
  // r + 1, which is the fraction of the disc inside the box. The oracle uses
  // the per-site threshold mark for a centred disc and independence across
  // sites; the comparison allows the disc/box mismatch a wide band.
  const std::size_t L = 10000;
  const double thr = std::pow(double(L), 0.65);
  // radius needed so that a quarter-disc (corner site) already reaches thr
  // (upper bound on u) and a full disc does (lower bound)
  const double r_full = std::sqrt(thr / M_PI) - 1.0;
  const double r_quarter = std::sqrt(4.0 * thr / M_PI) - 1.0;
  const double u_hi = std::pow(r_full, -2.0 / 0.75);
  const double u_lo = std::pow(r_quarter, -2.0 / 0.75);
  const double p_hi = 1.0 - std::pow(1.0 - u_hi, double(L));
  const double p_lo = 1.0 - std::pow(1.0 - u_lo, double(L));
  const auto g = boolean_lattice_generate(BooleanLatticeSpec{2, 0.75}, {400, 400}, 3);
  const auto f = good_box_field(g, L, 0.75, 0.1);
  CHECK(f.boxes.size() == 16);
  CHECK(f.good_fraction.ci.hi >= p_lo);
  CHECK(f.good_fraction.ci.lo <= p_hi);
}

TEST_CASE("box survival") {
  RenormConfig c;
  c.lambda = 0.0;
  c.L = 100;
  const auto t = box_survival_experiment(c, {10}, {100}, 200, 1);
  // max of 25 unit exponentials: median = -log(1 - 2^{-1/25})
  const double exact = -std::log(1.0 - std::pow(0.5, 1.0 / 25.0));
  CHECK(t.rows[0].median_ci.contains(exact));
  c.gamma = 0.25;
  const auto t2 = box_survival_experiment(c, {10}, {100}, 200, 1);
  CHECK(t2.rows[0].median == t.rows[0].median);

  RenormConfig bad;
  bad.L = 1000;
  CHECK_THROWS_AS(validate(bad), SpecError);
}

TEST_CASE("larger gamma gives a supergraph") {
  std::vector<double> marks;
  for (int i = 0; i < 900; ++i) marks.push_back((i * 7919 % 900 + 0.5) / 900.0);
  const auto lo = boolean_lattice_build({30, 30}, marks, 0.25);
  const auto hi = boolean_lattice_build({30, 30}, marks, 0.75);
  for (std::size_t s = 0; s < lo.site_count(); ++s) {
    const auto a = lo.adjacency().neighbours(s);
    const auto b = hi.adjacency().neighbours(s);
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
}
