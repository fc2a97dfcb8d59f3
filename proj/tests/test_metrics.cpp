#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "stream/metrics.hpp"

using namespace stream;

TEST_CASE("mape hand values") {
  CHECK(mape({2.0}, {1.0}) == 50.0);
  CHECK(mape({4.0}, {1.0}) == 75.0);
  CHECK(mape({3.0, -2.0}, {3.0, -2.0}) == 0.0);
  // sign of the truth does not matter, only the relative error
  CHECK(mape({-2.0}, {-1.0}) == 50.0);
  CHECK_THAT(mape({2.0, 4.0}, {1.0, 3.0}),
             Catch::Matchers::WithinAbs(37.5, 1e-12));
  CHECK_THROWS_AS(mape({0.0}, {1.0}), DataError);
  CHECK_THROWS_AS(mape({1.0, 2.0}, {1.0}), ContractError);
  CHECK_THROWS_AS(mape({}, {}), ContractError);
}

TEST_CASE("scaled mse hand values") {
  CHECK(scaled_mse({2.0}, {1.0}) == 0.25);
  CHECK(scaled_mse({1.0, 5.0}, {1.0, 5.0}) == 0.0);
  CHECK_THAT(scaled_mse({2.0, 4.0}, {1.0, 2.0}),
             Catch::Matchers::WithinAbs(0.25, 1e-12));
  CHECK_THAT(scaled_mse({2.0, 4.0}, {1.0, 3.0}),
             Catch::Matchers::WithinAbs((0.25 + 0.0625) / 2.0, 1e-12));
  CHECK_THROWS_AS(scaled_mse({1.0, 0.0}, {1.0, 1.0}), DataError);
}

TEST_CASE("mape vs scaled mse relationship on a single point") {
  // for n = 1, scaled MSE = (MAPE / 100)^2
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    double t = u(rng);
    if (std::abs(t) < 0.1) t = 0.5;
    const double p = u(rng);
    const double m = mape({t}, {p}) / 100.0;
    CHECK_THAT(scaled_mse({t}, {p}), Catch::Matchers::WithinRel(m * m, 1e-10));
  }
}

TEST_CASE("hpd interval hand values") {
  SECTION("constant draws collapse to a point") {
    std::vector<double> d(30, 4.2);
    auto [lo, hi] = hpd_interval(d, 0.05);
    CHECK(lo == 4.2);
    CHECK(hi == 4.2);
  }
  SECTION("uniform grid, ties resolved to the lowest start") {
    std::vector<double> d;
    for (int i = 1; i <= 100; ++i) d.push_back(i);
    auto [lo, hi] = hpd_interval(d, 0.05);
    CHECK(lo == 1.0);
    CHECK(hi == 95.0);
  }
  SECTION("mass concentrated away from the tail") {
    // 90 draws near 0, 10 spread to 100: the 90% window hugs the cluster
    std::vector<double> d;
    for (int i = 0; i < 90; ++i) d.push_back(i * 0.01);
    for (int i = 0; i < 10; ++i) d.push_back(10.0 + i * 10.0);
    auto [lo, hi] = hpd_interval(d, 0.10);
    CHECK(lo == 0.0);
    CHECK(hi == 0.89);
  }
  CHECK_THROWS_AS(hpd_interval(std::vector<double>(5, 1.0), 0.05), DataError);
  CHECK_THROWS_AS(hpd_interval(std::vector<double>(30, 1.0), 0.0), DataError);
  CHECK_THROWS_AS(hpd_interval(std::vector<double>(30, 1.0), 1.5), DataError);
}

TEST_CASE("hpd interval properties on random draws") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> d;
    for (int i = 0; i < 500; ++i) d.push_back(n01(rng));
    auto [lo, hi] = hpd_interval(d, 0.05);
    // contains at least 95% of the draws
    int inside = 0;
    for (double v : d)
      if (v >= lo && v <= hi) ++inside;
    CHECK(inside >= 475);
    // never wider than the equal-tailed interval
    std::sort(d.begin(), d.end());
    const double eq = d[487] - d[12];
    CHECK(hi - lo <= eq + 1e-12);
    // symmetric-ish data: interval roughly centered
    CHECK(std::abs((hi + lo) / 2.0) < 0.5);
  }
}

TEST_CASE("median hand values") {
  CHECK(median({3.0}) == 3.0);
  CHECK(median({1.0, 3.0}) == 2.0);
  CHECK(median({5.0, 1.0, 3.0}) == 3.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK_THROWS_AS(median({}), ContractError);
}

TEST_CASE("interval score hand values") {
  // covered truth: just the width
  CHECK(interval_score({0.5}, {0.0}, {1.0}, 0.05) == 1.0);
  CHECK(interval_score({0.0}, {0.0}, {0.0}, 0.05) == 0.0);
  // truth above by 0.5 at alpha = 0.05: 1 + (2/0.05) * 0.5 = 21
  CHECK_THAT(interval_score({1.5}, {0.0}, {1.0}, 0.05),
             Catch::Matchers::WithinAbs(21.0, 1e-12));
  // symmetric penalty below
  CHECK_THAT(interval_score({-0.5}, {0.0}, {1.0}, 0.05),
             Catch::Matchers::WithinAbs(21.0, 1e-12));
  // averaging across entries
  CHECK_THAT(interval_score({0.5, 1.5}, {0.0, 0.0}, {1.0, 1.0}, 0.05),
             Catch::Matchers::WithinAbs(11.0, 1e-12));
  CHECK_THROWS_AS(interval_score({0.0}, {1.0}, {0.0}, 0.05), ContractError);
  CHECK_THROWS_AS(interval_score({0.0, 1.0}, {0.0}, {1.0}, 0.05),
                  ContractError);
}

TEST_CASE("interval score rewards narrower covering intervals") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int rep = 0; rep < 30; ++rep) {
    const double half = u(rng);
    const std::vector<double> truth{0.0};
    const double wide =
        interval_score(truth, {-half - 1.0}, {half + 1.0}, 0.05);
    const double narrow = interval_score(truth, {-half}, {half}, 0.05);
    CHECK(narrow < wide);
  }
}
