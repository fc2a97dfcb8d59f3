#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "stream/diagnostics.hpp"

using namespace stream;

TEST_CASE("gelman rubin hand value") {
  // W = 2, B/n = 0.5, Vhat = 1/2 * 2 + 0.5 = 1.5 -> sqrt(0.75)
  std::vector<std::vector<double>> chains{{0.0, 2.0}, {1.0, 3.0}};
  CHECK_THAT(gelman_rubin(chains),
             Catch::Matchers::WithinAbs(std::sqrt(0.75), 1e-12));
}

TEST_CASE("gelman rubin degenerate cases") {
  // zero within-chain variance but separated chains: infinite Rhat
  CHECK(gelman_rubin({{1.0, 1.0}, {2.0, 2.0}}) ==
        std::numeric_limits<double>::infinity());
  // all chains constant and equal: converged by convention
  CHECK(gelman_rubin({{1.0, 1.0}, {1.0, 1.0}}) == 1.0);
  CHECK_THROWS_AS(gelman_rubin({{1.0, 2.0}}), ContractError);
  CHECK_THROWS_AS(gelman_rubin({{1.0}, {2.0}}), ContractError);
  CHECK_THROWS_AS(gelman_rubin({{1.0, 2.0}, {1.0, 2.0, 3.0}}), ContractError);
}

TEST_CASE("gelman rubin is affine invariant") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  std::vector<std::vector<double>> chains(3, std::vector<double>(50));
  for (auto& c : chains)
    for (auto& v : c) v = n01(rng);
  const double r = gelman_rubin(chains);
  auto scaled = chains;
  for (auto& c : scaled)
    for (auto& v : c) v = -7.0 * v + 3.0;
  CHECK_THAT(gelman_rubin(scaled), Catch::Matchers::WithinAbs(r, 1e-10));
}

TEST_CASE("iid chains sit near 1, shifted chains blow up") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n01;
  std::vector<std::vector<double>> chains(4, std::vector<double>(2000));
  for (auto& c : chains)
    for (auto& v : c) v = n01(rng);
  const double r = gelman_rubin(chains);
  CHECK(r > 0.99);
  CHECK(r < 1.02);

  auto shifted = chains;
  for (auto& v : shifted[0]) v += 10.0;
  CHECK(gelman_rubin(shifted) > 2.0);
}

TEST_CASE("split Rhat catches within-chain drift") {
  // two identical trending chains: classical Rhat cannot see the drift
  std::vector<double> trend;
  for (int i = 0; i < 1000; ++i) trend.push_back(0.01 * i);
  std::vector<std::vector<double>> chains{trend, trend};
  CHECK(gelman_rubin(chains) < 1.01);
  CHECK(gelman_rubin_split(chains) > 1.5);
}

TEST_CASE("convergence report") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> n01;
  auto iid_chains = [&]() {
    std::vector<std::vector<double>> c(3, std::vector<double>(500));
    for (auto& ch : c)
      for (auto& v : ch) v = n01(rng);
    return c;
  };
  SECTION("all good parameters converge") {
    std::vector<std::string> names{"a", "b", "c"};
    std::vector<std::vector<std::vector<double>>> per_param{
        iid_chains(), iid_chains(), iid_chains()};
    auto rep = convergence_report(names, per_param);
    CHECK(rep.converged);
    CHECK(rep.max_r_hat < 1.1);
    CHECK(rep.r_hat.size() == 3);
    CHECK(rep.median_r_hat <= rep.max_r_hat);
  }
  SECTION("one stuck parameter fails the report") {
    auto bad = iid_chains();
    for (auto& v : bad[0]) v += 50.0;
    std::vector<std::vector<std::vector<double>>> per_param{iid_chains(), bad};
    auto rep = convergence_report({"good", "stuck"}, per_param);
    CHECK_FALSE(rep.converged);
    CHECK(rep.r_hat.at("stuck") > 1.1);
    CHECK(rep.max_r_hat == rep.r_hat.at("stuck"));
  }
  SECTION("infinite Rhat is never converged") {
    std::vector<std::vector<double>> frozen{{1.0, 1.0}, {2.0, 2.0}};
    auto rep = convergence_report({"p"}, {frozen});
    CHECK_FALSE(rep.converged);
    CHECK(rep.max_r_hat == std::numeric_limits<double>::infinity());
  }
  SECTION("name mismatch throws") {
    CHECK_THROWS_AS(convergence_report({"a", "b"}, {iid_chains()}),
                    ContractError);
  }
  SECTION("split flag routes to the split statistic") {
    std::vector<double> trend;
    for (int i = 0; i < 1000; ++i) trend.push_back(0.01 * i);
    std::vector<std::vector<std::vector<double>>> per_param{{trend, trend}};
    CHECK(convergence_report({"p"}, per_param, 1.1, false).converged);
    CHECK_FALSE(convergence_report({"p"}, per_param, 1.1, true).converged);
  }
}
