#ifndef STREAM_SIMULATE_HPP
#define STREAM_SIMULATE_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "stream/data.hpp"
#include "stream/errors.hpp"
#include "stream/rng.hpp"

namespace stream {

struct ScenarioConfig {
  double a1 = 1.0, b1 = 1.0, c1 = 1.0;  // time-trend amplitudes
  double d1 = 10.0, d2 = 2.0;           // heterogeneity scales
  int m = 80;
  int J = 30;
  int K = 6;
  int t_min = 1, t_max = 24;
  long n_min = 100, n_max = 10000;
  std::uint64_t seed = 0;
};

enum class ScenarioId { i, ii, iii, iv };

inline ScenarioId scenario_id_from_string(const std::string& s) {
  if (s == "i") return ScenarioId::i;
  if (s == "ii") return ScenarioId::ii;
  if (s == "iii") return ScenarioId::iii;
  if (s == "iv") return ScenarioId::iv;
  throw ConfigError("unknown scenario '" + s + "' (expected i|ii|iii|iv)");
}

inline ScenarioConfig scenario_params(ScenarioId id) {
  ScenarioConfig c;
  switch (id) {
    case ScenarioId::i:   c.a1 = 1; c.b1 = 1; c.c1 = 1; c.d1 = 10; c.d2 = 2;   break;
    case ScenarioId::ii:  c.a1 = 1; c.b1 = 1; c.c1 = 1; c.d1 = 5;  c.d2 = 0.5; break;
    case ScenarioId::iii: c.a1 = 0; c.b1 = 0; c.c1 = 0; c.d1 = 10; c.d2 = 2;   break;
    case ScenarioId::iv:  c.a1 = 0; c.b1 = 0; c.c1 = 0; c.d1 = 5;  c.d2 = 0.5; break;
  }
  return c;
}

struct SimulatedTruth {
  std::vector<double> theta;
  std::vector<double> sigma2;
};

namespace detail {

// Half-line truncation at 0 by rejection; acceptance probability is 1/2.
inline double truncated_normal_nonneg(Rng& rng, double mean, double sd) {
  for (;;) {
    const double v = mean + sd * draw_normal(rng);
    if (v >= 0.0) return v;
  }
}

}  // namespace detail

inline std::pair<Dataset, SimulatedTruth> generate_dataset(
    const ScenarioConfig& cfg) {
  if (cfg.m < 2 || cfg.J < 1 || cfg.K < 1)
    throw ConfigError("scenario dimensions out of range");
  Rng rng = make_rng(derive_seed(cfg.seed, tag_of("simulate")));

  const double mu_theta = 3.0 + 2.0 * draw_normal(rng);
  const double sigma_theta2 = detail::truncated_normal_nonneg(rng, 0.0, cfg.d1);
  const double sd_theta = std::sqrt(sigma_theta2);
  std::vector<double> theta_a(static_cast<std::size_t>(cfg.J));
  std::vector<double> theta_b(static_cast<std::size_t>(cfg.K));
  for (auto& v : theta_a) v = mu_theta + sd_theta * draw_normal(rng);
  for (auto& v : theta_b) v = mu_theta + sd_theta * draw_normal(rng);

  const double mu_sigma = 1.0 + 0.1 * draw_normal(rng);
  const double sigma_sigma2 = detail::truncated_normal_nonneg(rng, 0.0, cfg.d2);
  const double sd_sigma = std::sqrt(sigma_sigma2);
  std::vector<double> delta_a(static_cast<std::size_t>(cfg.J));
  std::vector<double> delta_b(static_cast<std::size_t>(cfg.K));
  for (auto& v : delta_a) v = mu_sigma + sd_sigma * draw_normal(rng);
  for (auto& v : delta_b) v = mu_sigma + sd_sigma * draw_normal(rng);

  std::vector<ExperimentRecord> records;
  SimulatedTruth truth;
  records.reserve(static_cast<std::size_t>(cfg.m));
  for (int i = 0; i < cfg.m; ++i) {
    ExperimentRecord r;
    r.id = "sim_" + std::to_string(i + 1);
    const double x = draw_uniform(rng, 1.0, 10.0);
    r.x = {x};
    r.t = static_cast<double>(
        std::uniform_int_distribution<int>(cfg.t_min, cfg.t_max)(rng));
    r.n = std::uniform_int_distribution<long>(cfg.n_min, cfg.n_max)(rng);
    const int ja = std::uniform_int_distribution<int>(0, cfg.J - 1)(rng);
    const int kb = std::uniform_int_distribution<int>(0, cfg.K - 1)(rng);
    r.group_a = "A" + std::to_string(ja + 1);
    r.group_b = "B" + std::to_string(kb + 1);

    const double theta =
        theta_a[static_cast<std::size_t>(ja)] +
        theta_b[static_cast<std::size_t>(kb)] +
        cfg.a1 * std::sin(2.0 * M_PI * r.t / 12.0) +
        cfg.b1 * std::cos(2.0 * M_PI * r.t / 12.0) + cfg.c1 * r.t / 12.0 +
        0.5 * x;
    const double ig_scale =
        std::exp(delta_a[static_cast<std::size_t>(ja)] +
                 delta_b[static_cast<std::size_t>(kb)] + 0.1 * x);
    std::gamma_distribution<double> gd(2.0, 1.0 / ig_scale);
    double gdraw = gd(rng);
    while (gdraw <= 0.0) gdraw = gd(rng);
    const double sigma2 = 1.0 / gdraw;

    // y_ij ~ N(theta, n sigma^2), accumulated streaming (Welford): the raw
    // observations are never stored.
    const double obs_sd = std::sqrt(static_cast<double>(r.n) * sigma2);
    double mean = 0.0, m2 = 0.0;
    for (long j = 1; j <= r.n; ++j) {
      const double yj = theta + obs_sd * draw_normal(rng);
      const double d = yj - mean;
      mean += d / static_cast<double>(j);
      m2 += d * (yj - mean);
    }
    r.y = mean;
    r.s2 = m2 / (static_cast<double>(r.n) * static_cast<double>(r.n - 1));

    truth.theta.push_back(theta);
    truth.sigma2.push_back(sigma2);
    records.push_back(std::move(r));
  }
  return {Dataset::from_records(std::move(records)), std::move(truth)};
}

}  // namespace stream

#endif
