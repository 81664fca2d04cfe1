#include <doctest.h>

#include <algorithm>
#include <string>
#include <unordered_set>
#include <vector>

#include "cpphase/rng.hpp"

using namespace cpphase;

TEST_CASE("philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(philox4x32_10(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("stream derivation has no collisions over a million keys") {
  const std::vector<std::string> tags = {"graph", "survival", "omega", "star", "sweep",
                                         "renorm-cp", "lambda-c", "domination", "cv", "bootstrap"};
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(1'100'000);
  std::size_t n = 0;
  for (std::uint64_t seed : {0ULL, 1ULL}) {
    for (const auto& t : tags) {
      for (std::uint64_t i = 0; i < 50'000; ++i) {
        seen.insert(derive_stream(seed, t, i));
        ++n;
      }
    }
  }
  CHECK(n == 1'000'000);
  CHECK(seen.size() == n);
}

TEST_CASE("streams are reproducible and distinct") {
  StreamRng a(derive_stream(7, "x", 3)), b(derive_stream(7, "x", 3)), c(derive_stream(7, "x", 4));
  std::vector<std::uint64_t> va, vb, vc;
  for (int i = 0; i < 100; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  a.reset(0);
  CHECK(a() == va[0]);
}

TEST_CASE("uniform, below and exponential behave") {
  StreamRng r(derive_stream(11, "moments", 0));
  const int n = 200000;
  double s = 0, se = 0;
  std::vector<int> counts(7, 0);
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    s += u;
    const auto k = r.below(7);
    REQUIRE(k < 7);
    ++counts[k];
    se += r.exponential(2.0);
  }
  CHECK(s / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(se / n == doctest::Approx(0.5).epsilon(0.02));
  for (int c : counts) CHECK(std::abs(c - n / 7.0) < 5 * std::sqrt(n / 7.0));
}
