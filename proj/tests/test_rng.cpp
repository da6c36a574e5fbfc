#include <doctest.h>

#include <cmath>
#include <set>

#include "seqmatch/rng.hpp"

using namespace seqmatch;

TEST_CASE("philox known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter streams are reproducible and distinct") {
  CounterRng a(42, 1, 7, 500), b(42, 1, 7, 500);
  for (int i = 0; i < 1000; ++i) CHECK(a() == b());
  std::set<std::uint64_t> firsts;
  for (std::uint64_t seed : {1ULL, 2ULL})
    for (std::uint32_t stream : {0u, 1u})
      for (std::uint32_t trial : {0u, 1u})
        for (std::uint32_t n : {100u, 200u}) firsts.insert(CounterRng(seed, stream, trial, n)());
  CHECK(firsts.size() == 16);
}

TEST_CASE("uniform draws look uniform") {
  CounterRng g(9, 0, 0, 0);
  const int N = 400000;
  double s = 0.0, s2 = 0.0;
  int bins[10] = {};
  for (int i = 0; i < N; ++i) {
    const double u = g.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
    ++bins[static_cast<int>(u * 10)];
  }
  CHECK(std::abs(s / N - 0.5) < 4 * std::sqrt(1.0 / 12 / N));
  CHECK(std::abs(s2 / N - 1.0 / 3) < 0.002);
  double chi2 = 0.0;
  for (int b : bins) chi2 += (b - N / 10.0) * (b - N / 10.0) / (N / 10.0);
  CHECK(chi2 < 30.0);  // 9 degrees of freedom; p < 5e-4
}
