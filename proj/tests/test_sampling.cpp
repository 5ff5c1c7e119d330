#include "bathreuse/sampling.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace bathreuse;

namespace {

double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }
double dfact(int n) { return n <= 1 ? 1.0 : n * dfact(n - 2); }

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("stretch examples") {
  const double h = 0.05;
  const std::vector<double> v{-0.03, 0.02};
  const TimeSequence s = sequence_from_values(v, h);
  CHECK(stretch(s, 0) == s);
  const auto out = stretch(s, 2).values(h);
  CHECK(out[0] == doctest::Approx(-0.13).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(0.12).epsilon(1e-14));
  CHECK_THROWS_AS(stretch(s, -1), std::invalid_argument);
}

TEST_CASE("grid time decomposition") {
  const GridTime g = GridTime::from_units(-2.25);
  CHECK(g.cell == -3);
  CHECK(g.frac == 0.75);
  CHECK(GridTime::from_units(std::nextafter(3.0, 2.0)).cell <= 3);
  CHECK(GridTime::from_units(-1e-17).frac < 1.0);
  CHECK(GridTime{0, 0.3}.near_zero());
  CHECK(GridTime{-1, 0.3}.near_zero());
  CHECK_FALSE(GridTime{1, 0.3}.near_zero());
}

TEST_CASE("dyson volumes") {
  CHECK(region_volume_dyson(1, 4, 0.1) == doctest::Approx(0.8));
  CHECK(region_volume_dyson_fresh(3, 2, 0.1) == doctest::Approx((0.064 - 0.008) / 6.0).epsilon(1e-14));
  double sum = 0.0;
  for (int j = 1; j <= 5; ++j) sum += region_volume_dyson_fresh(3, j, 0.1);
  CHECK(sum == doctest::Approx(region_volume_dyson(3, 5, 0.1)).epsilon(1e-14));
}

TEST_CASE("inchworm volumes") {
  for (int p = -4; p <= -1; ++p)
    for (int k = 0; k <= 4; ++k) CHECK(region_volume_inch(1, p, k, 0.1) == doctest::Approx(0.1));
  CHECK(region_volume_inch(3, -2, 1, 0.1) == doctest::Approx((0.027 - 0.008) / 6.0).epsilon(1e-13));
  CHECK(region_volume_inch_fresh(3, -2, 1, 0.1) ==
        doctest::Approx((0.027 - 0.008) / 6.0 - 0.001 / 6.0).epsilon(1e-13));
  CHECK(region_volume_inch_fresh(5, -1, 3, 0.1) == region_volume_inch(5, -1, 3, 0.1));
  CHECK(region_volume_inch_fresh(5, -3, 0, 0.1) == region_volume_inch(5, -3, 0, 0.1));
}

TEST_CASE("allocation arithmetic") {
  SamplingConfig cfg;
  cfg.b_emp = 0.2;
  cfg.h = 0.05;
  cfg.m0_hat = 100;
  cfg.m_bar = 5;
  cfg.num_steps = 10;
  CHECK(allocate_dyson(cfg, 1)[0] == 100);
  const double lambda = 2 * 0.2 * 0.05;
  const double x = 100 / lambda * (std::pow(0.3, 3) - std::pow(0.2, 3)) / fact(3) * dfact(3) * std::pow(0.2, 2);
  CHECK(allocate_dyson(cfg, 3)[1] == static_cast<std::int64_t>(std::nearbyint(x)));
  CHECK(allocate_inch(cfg, -1, 0)[0] == 100);
  // interior regions receive fewer samples than boundary ones of the same size
  CHECK(allocate_inch(cfg, -3, 2)[1] < allocate_inch(cfg, -1, 4)[1]);
  SamplingConfig tiny = cfg;
  tiny.b_emp = 1e-9;
  for (int k = 0; k <= 3; ++k)
    for (std::size_t r = 1; r < 3; ++r) CHECK(allocate_inch(tiny, -2, k)[r] == 0);
}

TEST_CASE("densities") {
  SamplingConfig cfg;
  cfg.m_bar = 1;
  cfg.h = 0.1;
  CHECK(density_dyson(cfg, 4, 1) == doctest::Approx(1.0 / 0.8));
  cfg.m_bar = 7;
  cfg.b_emp = 0.3;
  double total = 0.0;
  for (int m = 1; m <= 7; m += 2) total += density_dyson(cfg, 10, m) * region_volume_dyson(m, 10, 0.1);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  double lam = 0.0;
  for (int m = 1; m <= 7; m += 2) lam += std::pow(2.0, m) / dfact(m - 1) * std::pow(0.3, 0.5 * (m + 1));
  CHECK(density_dyson(cfg, 10, 3) == doctest::Approx(3 * 0.09 / lam).epsilon(1e-13));
  double inch = 0.0;
  for (int m = 1; m <= 7; m += 2)
    for (int p = -3; p <= 4; ++p) inch += density_inch(cfg, -3, 5, m) * region_volume_inch(m, p, 5, 0.1);
  CHECK(inch == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("dyson draws stay in the fresh region") {
  RandomStream rng(3, 17);
  std::vector<GridTime> seq;
  for (int i : {1, 2, 7}) {
    for (int q = 0; q < 500; ++q) {
      draw_dyson_sequence(rng, 5, i, seq);
      REQUIRE(in_dyson_fresh(seq, i));
      for (auto& g : seq) REQUIRE_FALSE(g.is_zero());
    }
  }
}

TEST_CASE("rejection acceptance rate matches the volume ratio") {
  RandomStream rng(9, 1);
  std::vector<GridTime> seq;
  const int i = 6, m = 3, draws = 100000;
  std::uint64_t trials = 0;
  for (int q = 0; q < draws; ++q) draw_dyson_sequence(rng, m, i, seq, &trials);
  const double p = 1.0 - std::pow(5.0 / 6.0, m);
  const double observed = static_cast<double>(draws) / static_cast<double>(trials);
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(trials));
  CHECK(std::abs(observed - p) < 3.0 * sigma);
}

TEST_CASE("first inchworm point follows the power law (KS)") {
  RandomStream rng(21, 4);
  std::vector<GridTime> seq;
  const int m = 5, p = -1, k = 3, draws = 100000;
  std::vector<double> d;
  for (int q = 0; q < draws; ++q) {
    draw_inch_sequence(rng, m, p, k, seq);
    REQUIRE(in_inch_fresh(seq, p, k));
    d.push_back(seq[0].units());
  }
  std::sort(d.begin(), d.end());
  const double a = std::pow(k - p, m), b = std::pow(k - p - 1, m);
  double ks = 0.0;
  for (int q = 0; q < draws; ++q) {
    const double cdf = (a - std::pow(k - d[static_cast<std::size_t>(q)], m)) / (a - b);
    ks = std::max({ks, std::abs(cdf - static_cast<double>(q) / draws), std::abs(cdf - static_cast<double>(q + 1) / draws)});
  }
  // 1% critical value of the one-sample KS statistic
  CHECK(ks < 1.63 / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("interior inchworm draws need a point near zero") {
  RandomStream rng(2, 2);
  std::vector<GridTime> seq;
  for (int q = 0; q < 300; ++q) {
    draw_inch_sequence(rng, 3, -3, 2, seq);
    REQUIRE(in_inch_fresh(seq, -3, 2));
    REQUIRE(std::any_of(seq.begin(), seq.end(), [](const GridTime& g) { return g.near_zero(); }));
  }
}

TEST_CASE("disjoint cover of the simplex by stretched fresh regions") {
  // each point of T_i belongs to exactly one I_{i-j}(T_hat_j)
  RandomStream rng(8, 8);
  const int i = 6;
  for (int q = 0; q < 10000; ++q) {
    std::vector<double> x(3);
    for (auto& v : x) v = -i + 2.0 * i * rng.uniform();
    std::sort(x.begin(), x.end());
    std::vector<GridTime> g;
    for (double v : x) g.push_back(GridTime::from_units(v));
    int owners = 0;
    for (int j = 1; j <= i; ++j) {
      // undo the stretch by i - j and test freshness at j
      std::vector<GridTime> back;
      bool ok = true;
      for (const auto& pt : g) {
        const GridTime b = pt.negative() ? GridTime{pt.cell + (i - j), pt.frac} : GridTime{pt.cell - (i - j), pt.frac};
        if (b.negative() != pt.negative()) ok = false;
        back.push_back(b);
      }
      if (ok && in_dyson_fresh(back, j)) ++owners;
    }
    CHECK(owners == 1);
  }
}

TEST_CASE("batches are reproducible and match the allocation") {
  SamplingConfig cfg;
  cfg.m_bar = 5;
  cfg.m0_hat = 60;
  cfg.num_steps = 8;
  const SampleBatch a = sample_fresh_dyson(cfg, 4);
  const SampleBatch b = sample_fresh_dyson(cfg, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t q = 0; q < a.size(); ++q) CHECK(a.to_sequence(q) == b.to_sequence(q));
  const auto counts = allocate_dyson(cfg, 4);
  for (int m = 1; m <= 5; m += 2)
    CHECK(a.count_of_order(m) == static_cast<std::size_t>(counts[static_cast<std::size_t>(order_index(m))]));
  const SampleBatch c = sample_fresh_inch(cfg, -2, 3);
  const auto ic = allocate_inch(cfg, -2, 3);
  for (int m = 1; m <= 5; m += 2)
    CHECK(c.count_of_order(m) == static_cast<std::size_t>(ic[static_cast<std::size_t>(order_index(m))]));
}

TEST_CASE("config validation") {
  SamplingConfig cfg;
  cfg.m_bar = 4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SamplingConfig{};
  cfg.h = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SamplingConfig{};
  cfg.m_bar = 15;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

}
