#include "bathreuse/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace bathreuse;

TEST_SUITE("rng") {

TEST_CASE("Philox4x64-10 known answers") {
  const auto a = Philox4x64::block({0, 0, 0, 0}, {0, 0});
  CHECK(a[0] == 0x16554d9eca36314cULL);
  CHECK(a[1] == 0xdb20fe9d672d0fdcULL);
  CHECK(a[2] == 0xd7e772cee186176bULL);
  CHECK(a[3] == 0x7e68b68aec7ba23bULL);

  const auto b = Philox4x64::block({0xffffffffffffffffULL, 0xffffffffffffffffULL, 0xffffffffffffffffULL,
                                    0xffffffffffffffffULL},
                                   {0xffffffffffffffffULL, 0xffffffffffffffffULL});
  CHECK(b[0] == 0x87b092c3013fe90bULL);
  CHECK(b[1] == 0x438c3c67be8d0224ULL);
  CHECK(b[2] == 0x9cc7d7c69cd777b6ULL);
  CHECK(b[3] == 0xa09caebf594f0ba0ULL);

  const auto c = Philox4x64::block({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL,
                                    0x082efa98ec4e6c89ULL},
                                   {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL});
  CHECK(c[0] == 0xa528f45403e61d95ULL);
  CHECK(c[1] == 0x38c72dbd566e9788ULL);
  CHECK(c[2] == 0xa5a1610e72fd18b5ULL);
  CHECK(c[3] == 0x57bd43b5e52b7fe6ULL);
}

TEST_CASE("stream starts at counter one") {
  RandomStream s(7, 9);
  const auto blk = Philox4x64::block({1, 0, 0, 0}, {7, 9});
  for (int q = 0; q < 4; ++q) CHECK(s.next_u64() == blk[static_cast<std::size_t>(q)]);
  const auto blk2 = Philox4x64::block({2, 0, 0, 0}, {7, 9});
  CHECK(s.next_u64() == blk2[0]);
}

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(1, 2), b(1, 2), c(1, 3);
  for (int q = 0; q < 100; ++q) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
}

TEST_CASE("uniform stays in range with the right mean") {
  RandomStream s(42, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int q = 0; q < n; ++q) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // standard error of the mean is 1/sqrt(12 n)
  CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("region stream ids do not collide") {
  std::set<std::uint64_t> ids;
  int count = 0;
  for (auto kind : {RegionKind::dyson, RegionKind::inchworm, RegionKind::bare})
    for (int a = -30; a <= 30; ++a)
      for (int b = -3; b <= 30; b += 3)
        for (int m = 1; m <= 13; m += 2) {
          ids.insert(region_stream_id(kind, a, b, m));
          ++count;
        }
  CHECK(ids.size() == static_cast<std::size_t>(count));
}

TEST_CASE("mix_seed spreads indices") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t k = 0; k < 1000; ++k) seeds.insert(mix_seed(1, k));
  CHECK(seeds.size() == 1000);
  CHECK(mix_seed(1, 5) == mix_seed(1, 5));
}

}
