#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "stream/logdensity.hpp"

using namespace stream;
using stream_test::all_model_kinds;
using stream_test::toy_dataset;

namespace {

Eigen::VectorXd random_point(const ParamLayout& layout, std::mt19937_64& rng,
                             double radius = 1.2) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Eigen::VectorXd v(layout.total);
  for (int i = 0; i < layout.total; ++i) v(i) = u(rng);
  return v;
}

// Independent term-by-term density oracle for STREAM on the unconstrained
// vector, written against the model equations directly: explicit normal,
// gamma, and half-Cauchy formulas.  The GP block is non-centered, so the
// vector holds z ~ N(0, I) and the time effect is L z with an explicit
// dense Cholesky of the jittered kernel matrix.
double stream_lp_oracle(const LogDensityModel& model, const Dataset& d,
                        const ModelSpec& spec, const Eigen::VectorXd& u) {
  const auto& lay = model.layout();
  auto at = [&](const std::string& name, int i = 0) {
    return u(lay.block(name).offset + i);
  };
  const int J = d.num_groups_a(), K = d.num_groups_b();
  const int q = d.num_covariates();
  const auto& grid = model.time_grid();
  const int L = static_cast<int>(grid.size());

  auto norm = [](double x, double mu, double var) {
    return -0.5 * std::log(2.0 * M_PI * var) -
           (x - mu) * (x - mu) / (2.0 * var);
  };
  auto hc_log = [](double uu, double eta) {
    const double p = std::exp(uu);
    return std::log(2.0) - std::log(M_PI) - std::log(eta) -
           std::log(1.0 + (p / eta) * (p / eta)) + uu;
  };

  const double tau_a = std::exp(0.5 * at("tau_a2"));
  const double tau_b = std::exp(0.5 * at("tau_b2"));
  const double tau_c = std::exp(0.5 * at("tau_c2"));
  const double tau_d = std::exp(0.5 * at("tau_d2"));
  const double tau_e2 = std::exp(at("tau_sigma2"));
  const double sigma_p2 = std::exp(at("sigma_p2"));
  const double l_p = std::exp(at("l_p"));

  // time effect: theta_c = L z with C = L L^T the jittered kernel matrix
  Eigen::MatrixXd C(L, L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      const double s = std::sin(
          M_PI * std::abs(grid[static_cast<std::size_t>(i)] -
                          grid[static_cast<std::size_t>(j)]) / spec.p_e);
      C(i, j) = sigma_p2 * std::exp(-2.0 * s * s / (l_p * l_p));
    }
  C.diagonal().array() += 1e-8 * sigma_p2;
  Eigen::VectorXd zc(L);
  for (int l = 0; l < L; ++l) zc(l) = at("theta_c", l);
  const Eigen::VectorXd tc = Eigen::MatrixXd(C.llt().matrixL()) * zc;

  double lp = 0.0;
  // data terms
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& r = d.records()[i];
    const int a = d.group_a_index(r);
    const int b = d.group_b_index(r);
    int c = -1;
    for (int l = 0; l < L; ++l)
      if (grid[static_cast<std::size_t>(l)] == r.t) c = l;
    double theta = at("alpha_theta") + tau_a * at("theta_a", a) +
                   tau_b * at("theta_b", b) + tc(c);
    for (int k = 0; k < q; ++k)
      theta += at("beta_theta", k) * r.x[static_cast<std::size_t>(k)];
    const double w = at("sigma_i2", static_cast<int>(i));
    const double sigma2 = std::exp(w);
    lp += norm(r.y, theta, sigma2);
    // gamma density of S^2 with shape (n-1)/2, rate (n-1)/(2 sigma^2)
    const double shape = 0.5 * (r.n - 1);
    const double rate = 0.5 * (r.n - 1) / sigma2;
    lp += shape * std::log(rate) - std::lgamma(shape) +
          (shape - 1.0) * std::log(r.s2) - rate * r.s2;
    // lognormal layer on w = log sigma_i^2
    double mu = at("alpha_sigma") + tau_c * at("delta_a", a) +
                tau_d * at("delta_b", b) -
                std::log(static_cast<double>(r.n));
    for (int k = 0; k < q; ++k)
      mu += at("beta_sigma", k) * r.x[static_cast<std::size_t>(k)];
    lp += norm(w, mu, tau_e2);
  }
  // priors
  const auto& pr = spec.priors;
  lp += norm(at("alpha_theta"), pr.m_alpha_theta,
             pr.s_alpha_theta * pr.s_alpha_theta);
  lp += norm(at("alpha_sigma"), pr.m_alpha_sigma,
             pr.s_alpha_sigma * pr.s_alpha_sigma);
  for (int k = 0; k < q; ++k) {
    lp += norm(at("beta_theta", k), 0.0, 1000.0 * 1000.0);
    lp += norm(at("beta_sigma", k), 0.0, 1000.0 * 1000.0);
  }
  for (int j = 0; j < J; ++j) lp += norm(at("theta_a", j), 0, 1);
  for (int k = 0; k < K; ++k) lp += norm(at("theta_b", k), 0, 1);
  for (int j = 0; j < J; ++j) lp += norm(at("delta_a", j), 0, 1);
  for (int k = 0; k < K; ++k) lp += norm(at("delta_b", k), 0, 1);
  lp += hc_log(at("tau_a2"), pr.eta_a) + hc_log(at("tau_b2"), pr.eta_b);
  lp += hc_log(at("tau_c2"), pr.eta_c) + hc_log(at("tau_d2"), pr.eta_d);
  lp += hc_log(at("tau_sigma2"), pr.eta_e);
  lp += hc_log(at("sigma_p2"), pr.eta_sigma) + hc_log(at("l_p"), pr.eta_l);
  // standard-normal prior on the whitened GP coordinates
  for (int l = 0; l < L; ++l) lp += norm(zc(l), 0, 1);
  return lp;
}

}  // namespace

TEST_CASE("constrain exponentiates variance blocks and recenters effects") {
  auto d = toy_dataset(1);
  ModelSpec spec;
  spec.kind = ModelKind::STREAM;
  LogDensityModel model(spec, d);
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    auto u = random_point(model.layout(), rng);
    auto c = model.constrain(u);
    const auto& lay = model.layout();
    for (const char* name : {"tau_a2", "tau_b2", "tau_c2", "tau_d2",
                             "tau_sigma2", "sigma_p2", "l_p"}) {
      const auto& b = lay.block(name);
      CHECK_THAT(std::log(c(b.offset)),
                 Catch::Matchers::WithinAbs(u(b.offset), 1e-12));
    }
    const auto& bw = lay.block("sigma_i2");
    for (int i = 0; i < bw.len; ++i)
      CHECK_THAT(std::log(c(bw.offset + i)),
                 Catch::Matchers::WithinAbs(u(bw.offset + i), 1e-12));
    // random effects are raw * exp(u_tau / 2)
    const auto& ba = lay.block("theta_a");
    const double sa = std::exp(0.5 * u(lay.block("tau_a2").offset));
    for (int j = 0; j < ba.len; ++j)
      CHECK_THAT(c(ba.offset + j),
                 Catch::Matchers::WithinAbs(sa * u(ba.offset + j), 1e-12));
    // pass-through blocks unchanged
    CHECK(c(lay.block("alpha_theta").offset) ==
          u(lay.block("alpha_theta").offset));
  }
  // spot values
  Eigen::VectorXd u = Eigen::VectorXd::Zero(model.layout().total);
  CHECK(model.constrain(u)(model.layout().block("tau_a2").offset) == 1.0);
  u(model.layout().block("tau_a2").offset) = std::log(4.0);
  CHECK_THAT(model.constrain(u)(model.layout().block("tau_a2").offset),
             Catch::Matchers::WithinAbs(4.0, 1e-12));
}

TEST_CASE("hand-evaluated single likelihood terms") {
  // standard normal at its mode
  CHECK_THAT(normal_lpdf(0.0, 0.0, 1.0),
             Catch::Matchers::WithinAbs(-0.9189385332046727, 1e-12));
  // gamma term of the S^2 law: n=3, S2=2, sigma2=2 -> shape 1, rate 0.5
  // log density at 2 = log(0.5) - 1
  const double shape = 1.0, rate = 0.5;
  const double g = shape * std::log(rate) - std::lgamma(shape) +
                   (shape - 1.0) * std::log(2.0) - rate * 2.0;
  CHECK_THAT(g, Catch::Matchers::WithinAbs(std::log(0.5) - 1.0, 1e-12));
}

TEST_CASE("STREAM log posterior matches the term-by-term oracle") {
  auto d = toy_dataset(42, 3, 2, 2, 2, 1);
  ModelSpec spec;
  spec.kind = ModelKind::STREAM;
  LogDensityModel model(spec, d);
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    auto u = random_point(model.layout(), rng);
    const double got = model.log_posterior(u);
    const double want = stream_lp_oracle(model, d, spec, u);
    CHECK_THAT(got, Catch::Matchers::WithinAbs(want, 1e-8));
  }
}

TEST_CASE("log posterior is invariant under record permutation") {
  auto d = toy_dataset(8);
  auto recs = d.records();
  std::vector<stream::ExperimentRecord> shuffled{recs.rbegin(), recs.rend()};
  auto d2 = Dataset::from_records(shuffled);
  for (auto kind : {ModelKind::RE, ModelKind::RE_GP}) {
    ModelSpec spec;
    spec.kind = kind;
    LogDensityModel m1(spec, d), m2(spec, d2);
    REQUIRE(m1.layout().total == m2.layout().total);
    std::mt19937_64 rng(3);
    auto u = random_point(m1.layout(), rng);
    CHECK_THAT(m1.log_posterior(u),
               Catch::Matchers::WithinAbs(m2.log_posterior(u), 1e-9));
  }
}

TEST_CASE("fixed-variance models carry no S^2 blocks") {
  auto d = toy_dataset(4);
  for (auto kind : {ModelKind::FE, ModelKind::FE_M, ModelKind::RE,
                    ModelKind::RE_M, ModelKind::RE_GP}) {
    ModelSpec spec;
    spec.kind = kind;
    LogDensityModel model(spec, d);
    CHECK_FALSE(model.layout().has("sigma_i2"));
    CHECK_FALSE(model.layout().has("alpha_sigma"));
  }
}

TEST_CASE("likelihood is translation equivariant in y and alpha") {
  auto d = toy_dataset(12);
  const double shift = 3.7;
  auto recs = d.records();
  for (auto& r : recs) r.y += shift;
  auto d_shifted = Dataset::from_records(recs);
  for (auto kind : all_model_kinds()) {
    ModelSpec spec;
    spec.kind = kind;
    ModelSpec spec_shifted = spec;
    spec_shifted.priors.m_alpha_theta += shift;
    LogDensityModel m1(spec, d), m2(spec_shifted, d_shifted);
    std::mt19937_64 rng(9);
    auto u = random_point(m1.layout(), rng);
    auto u2 = u;
    u2(m1.layout().block("alpha_theta").offset) += shift;
    CHECK_THAT(m1.log_posterior(u),
               Catch::Matchers::WithinAbs(m2.log_posterior(u2), 1e-9));
  }
}

TEST_CASE("half-Cauchy density at the origin") {
  // with the Jacobian removed, exp(lpdf - u) tends to 2 / (pi eta) as u -> -inf
  for (double eta : {0.5, 2.5, 10.0}) {
    const double v = half_cauchy_lpdf_log(-30.0, eta) - (-30.0);
    CHECK_THAT(v, Catch::Matchers::WithinAbs(std::log(2.0 / (M_PI * eta)),
                                             1e-10));
  }
}

TEST_CASE("analytic gradient matches finite differences for all kinds") {
  std::mt19937_64 rng(2024);
  for (auto kind : all_model_kinds()) {
    ModelSpec spec;
    spec.kind = kind;
    for (int ds = 0; ds < 2; ++ds) {
      auto d = toy_dataset(100 + ds, 6, 3, 2, 4, 1);
      LogDensityModel model(spec, d);
      for (int rep = 0; rep < 3; ++rep) {
        auto u = random_point(model.layout(), rng);
        auto g = model.grad_log_posterior(u);
        const double h = 1e-5;
        for (int i = 0; i < model.layout().total; ++i) {
          auto up = u, um = u;
          up(i) += h;
          um(i) -= h;
          const double fd =
              (model.log_posterior(up) - model.log_posterior(um)) / (2 * h);
          const double tol =
              std::max(1e-8, 1e-5 * std::max(std::abs(fd), std::abs(g(i))));
          INFO(to_string(kind) << " coord " << i << " fd=" << fd
                               << " analytic=" << g(i));
          CHECK(std::abs(fd - g(i)) <= tol);
        }
      }
    }
  }
}

TEST_CASE("likelihood gradient in alpha is the precision-weighted residual") {
  auto d = toy_dataset(33);
  ModelSpec spec;
  spec.kind = ModelKind::FE;
  // huge prior sd so the prior contribution to alpha's gradient is negligible
  spec.priors.s_alpha_theta = 1e12;
  LogDensityModel model(spec, d);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(model.layout().total);
  const auto& lay = model.layout();
  u(lay.block("alpha_theta").offset) = 0.3;
  auto g = model.grad_log_posterior(u);
  double expected = 0.0;
  for (const auto& r : d.records()) {
    double theta = 0.3;  // all other effects zero
    expected += (r.y - theta) / r.s2;
  }
  CHECK_THAT(g(lay.block("alpha_theta").offset),
             Catch::Matchers::WithinRel(expected, 1e-9));
}

TEST_CASE("prior-only gradient vanishes at the symmetry point") {
  auto d = toy_dataset(77);
  ModelSpec spec;
  spec.kind = ModelKind::STREAM;
  LogDensityModel model(spec, d);
  model.set_include_likelihood(false);
  const auto& lay = model.layout();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(lay.total);
  // lognormal layer symmetry point: w_i = mu_i = -log n_i at zero effects
  const auto& bw = lay.block("sigma_i2");
  for (std::size_t i = 0; i < d.size(); ++i)
    u(bw.offset + static_cast<int>(i)) =
        -std::log(static_cast<double>(d.records()[i].n));
  auto g = model.grad_log_posterior(u);
  for (const char* name : {"alpha_theta", "theta_a", "theta_b", "theta_c",
                           "beta_theta", "alpha_sigma", "delta_a", "delta_b",
                           "beta_sigma"}) {
    const auto& b = lay.block(name);
    for (int i = 0; i < b.len; ++i)
      CHECK_THAT(g(b.offset + i), Catch::Matchers::WithinAbs(0.0, 1e-10));
  }
}

TEST_CASE("non-finite states reject instead of throwing") {
  auto d = toy_dataset(5);
  ModelSpec spec;
  spec.kind = ModelKind::STREAM;
  LogDensityModel model(spec, d);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(model.layout().total);
  u(0) = std::numeric_limits<double>::quiet_NaN();
  CHECK(model.log_posterior(u) == -std::numeric_limits<double>::infinity());
}
