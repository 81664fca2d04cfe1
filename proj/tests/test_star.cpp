#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "cpphase/error.hpp"
#include "cpphase/star.hpp"

using namespace cpphase;

TEST_CASE("star_threshold") {
  CHECK(star_threshold(100, 0.5) == 25);
  CHECK(star_threshold(10, 1.0) == 4);
  CHECK(star_threshold(1, 1e-12) == 1);
}

TEST_CASE("persistence with lambda = 0") {
  StarConfig c;
  c.lambda = 0.0;
  c.k = 20;
  c.horizon = 50;
  c.replicas = 500;
  CHECK(star_persist_from_K(c).prob.estimate == 0.0);
  CHECK(star_persist_from_root(c).prob.estimate == 0.0);
}

TEST_CASE("single-vertex persistence is e^-T") {
  StarConfig c;
  c.k = 0;
  c.lambda = 0.5;
  c.horizon = 1.0;
  c.replicas = 20000;
  c.initial = StarStart::root_only;
  const auto p = star_persist_from_K(c);
  const double exact = std::exp(-1.0);
  CHECK(std::abs(p.prob.estimate - exact) <= 3 * std::sqrt(exact * (1 - exact) / c.replicas));
}

namespace {

// 2-vertex star from the root; states (root, leaf) as bits.
Eigen::Matrix4d star2_generator(double lambda) {
  Eigen::Matrix4d Q = Eigen::Matrix4d::Zero();
  for (int s = 0; s < 4; ++s) {
    const bool root = s & 1, leaf = s & 2;
    if (root) Q(s, s & ~1) += 1.0;
    if (leaf) Q(s, s & ~2) += 1.0;
    if (root && !leaf) Q(s, s | 2) += lambda;
    if (leaf && !root) Q(s, s | 1) += lambda;
  }
  for (int s = 0; s < 4; ++s) Q(s, s) = -Q.row(s).sum();
  return Q;
}

}  // namespace

TEST_CASE("k = 1 from the root matches the 4-state chain") {
  // Event: at least one infected site on [1, T]. Make the empty state
  // absorbing and read P(not absorbed by T) from the root start.
  const double lambda = 1.0, T = 2.0;
  Eigen::Matrix4d Q = star2_generator(lambda);
  Q.row(0).setZero();
  const Eigen::Matrix4d P = (Q * T).exp();
  const double exact = 1.0 - P(1, 0);
  StarConfig c;
  c.k = 1;
  c.lambda = lambda;
  c.eps1 = 0.5;
  c.horizon = T;
  c.replicas = 20000;
  const auto p = star_persist_from_root(c);
  CHECK(std::abs(p.prob.estimate - exact) <= 3 * std::sqrt(exact * (1 - exact) / c.replicas));
}

TEST_CASE("persistence monotone in k and lambda, from-K above from-root") {
  StarConfig c;
  c.lambda = 0.5;
  c.eps1 = 0.1;
  c.horizon = 100;
  c.replicas = 2000;
  c.k = 50;
  const auto k50 = star_persist_from_K(c);
  c.k = 200;
  const auto k200 = star_persist_from_K(c);
  CHECK(k50.prob.ci.hi < k200.prob.ci.lo);
  c.k = 50;
  c.lambda = 0.7;
  const auto l7 = star_persist_from_K(c);
  CHECK(l7.prob.estimate >= k50.prob.estimate);
  c.lambda = 0.5;
  c.k = 100;
  const auto fk = star_persist_from_K(c);
  const auto fr = star_persist_from_root(c);
  CHECK(fk.prob.estimate >= fr.prob.estimate - (fk.prob.ci.hi - fk.prob.ci.lo) - (fr.prob.ci.hi - fr.prob.ci.lo));
  c.k = 100000;
  c.horizon = 1e6;
  CHECK_THROWS_AS(star_persist_from_K(c), BudgetExceeded);
}

TEST_CASE("leaf recoveries before the root is infected") {
  const double lambda = 0.5;
  const std::size_t K = 25;
  const auto s = sample_leaf_recoveries(100, K, lambda, 20000, 3);
  double m = 0, v = 0;
  for (double x : s) m += x;
  m /= s.size();
  for (double x : s) v += (x - m) * (x - m);
  v /= (s.size() - 1);
  CHECK(std::abs(m - expected_leaf_recoveries(K, lambda)) <= 3 * std::sqrt(v / s.size()));
  // per race the root wins with lambda/(1+lambda): mean q/(1-q) without truncation
  CHECK(expected_leaf_recoveries(1000, lambda) == doctest::Approx((1 / 1.5) / (1 - 1 / 1.5)));
}

TEST_CASE("survival time scaling") {
  // lambda = 0 from the full star: max of k+1 unit exponentials
  ScalingOptions o;
  o.horizon = 100;
  o.initial = StarStart::all;
  const auto t0 = star_survival_time_scaling({10, 40, 160}, 0.0, 0.5, 2000, 4, o);
  for (const auto& r : t0.rows) CHECK(r.ci.contains(-std::log(1.0 - std::pow(0.5, 1.0 / double(r.k + 1)))));
  CHECK(std::abs(t0.fit.slope) < 0.02);
  o.initial = StarStart::K_leaves_plus_root;

  o.horizon = 2000;
  const auto t = star_survival_time_scaling({10, 20, 40}, 0.5, 0.5, 200, 5, o);
  CHECK(t.fitted_rows == 3);
  CHECK(t.slope_ci.lo > 0.0);
}
