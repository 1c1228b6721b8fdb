#include <doctest.h>

#include <cmath>
#include <set>

#include "rkde/random.hpp"

using namespace rkde;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using W = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                      {0xffffffff, 0xffffffff}) ==
        W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                      {0xa4093822, 0x299f31d0}) ==
        W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are pure functions of (seed, stream)") {
  Philox a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool differ_stream = false, differ_seed = false;
  for (int i = 0; i < 16; ++i) {
    const auto va = a(), vc = c(), vd = d();
    CHECK(va == b());
    differ_stream = differ_stream || va != vc;
    differ_seed = differ_seed || va != vd;
  }
  CHECK(differ_stream);
  CHECK(differ_seed);
}

TEST_CASE("two outputs per block") {
  Philox g(1, 0);
  g();
  CHECK(g.block_index() == 1);
  g();
  CHECK(g.block_index() == 1);
  g();
  CHECK(g.block_index() == 2);
}

TEST_CASE("uniform is in (0, 1) with the right moments") {
  Philox g(3, 0);
  const int n = 200'000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = g.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
  }
  const double m = s / n;
  CHECK(std::abs(m - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(s2 / n - m * m - 1.0 / 12.0) < 2e-3);
}

TEST_CASE("normal variates have unit variance and light tails") {
  Philox g(5, 1);
  const int n = 200'000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  int beyond = 0;
  for (int i = 0; i < n; ++i) {
    const double z = g.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
    beyond += std::abs(z) > 1.96 ? 1 : 0;
  }
  CHECK(std::abs(s / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 0.015);
  CHECK(std::abs(s4 / n - 3.0) < 0.08);
  CHECK(std::abs(static_cast<double>(beyond) / n - 0.05) < 0.003);
}
