#ifndef STREAM_PREDICT_HPP
#define STREAM_PREDICT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stream/data.hpp"
#include "stream/errors.hpp"
#include "stream/kernel.hpp"
#include "stream/logdensity.hpp"
#include "stream/model.hpp"
#include "stream/rng.hpp"
#include "stream/sampler.hpp"

namespace stream {

// Everything needed to score future experiments from a finished fit.
struct PredictionTask {
  ModelSpec spec;
  const Dataset* test = nullptr;
  Eigen::MatrixXd draws;  // pooled constrained draws, (total draws) x P
  ParamLayout layout;
  LevelMaps train_levels;  // draw columns are indexed by the *training* maps
  std::vector<double> train_time_grid;  // GP models: the L fitted times
  double train_mean_s2 = 0.0;  // pooled-variance convention for non-MV models
  std::uint64_t seed = 0;
};

inline PredictionTask make_prediction_task(const ModelSpec& spec,
                                           const PosteriorDraws& draws,
                                           const Dataset& train,
                                           const Dataset& test,
                                           std::uint64_t seed) {
  if (train.num_covariates() != test.num_covariates())
    throw ContractError("train/test covariate dimension mismatch");
  PredictionTask task;
  task.spec = spec;
  task.test = &test;
  task.layout = draws.layout;
  task.train_levels = train.level_maps();
  task.seed = seed;
  if (task.layout.block("theta_a").len !=
          static_cast<int>(task.train_levels.group_a.size()) ||
      task.layout.block("theta_b").len !=
          static_cast<int>(task.train_levels.group_b.size()))
    throw ContractError("draws do not match the training group levels");

  Eigen::Index total = 0;
  for (const auto& c : draws.chains) total += c.draws.rows();
  task.draws.resize(total, draws.layout.total);
  Eigen::Index at = 0;
  for (const auto& c : draws.chains) {
    task.draws.middleRows(at, c.draws.rows()) = c.draws;
    at += c.draws.rows();
  }

  if (uses_gp(spec.kind)) {
    for (const auto& r : train.records()) task.train_time_grid.push_back(r.t);
    std::sort(task.train_time_grid.begin(), task.train_time_grid.end());
    task.train_time_grid.erase(
        std::unique(task.train_time_grid.begin(), task.train_time_grid.end()),
        task.train_time_grid.end());
    if (!task.layout.has("theta_c") ||
        task.layout.block("theta_c").len !=
            static_cast<int>(task.train_time_grid.size()))
      throw ContractError("draws do not match the training time grid");
  }
  double s = 0.0;
  for (const auto& r : train.records()) s += r.s2;
  task.train_mean_s2 = s / static_cast<double>(train.size());
  return task;
}

namespace detail {

// Draw from N(mean, cov) with a PSD-tolerant eigen factorization; tiny
// negative eigenvalues from conditioning round-off are clamped to zero.
inline Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean,
                                  const Eigen::MatrixXd& cov, Rng& rng) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::VectorXd scale = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = draw_normal(rng);
  return mean + es.eigenvectors() * scale.cwiseProduct(z);
}

// One fresh group effect per (draw, unseen label): hierarchical models draw
// from N(0, tau^2) of that draw, flat models from the N(0, 1000) prior.
inline double fresh_effect(const PredictionTask& task, const char* stream_tag,
                           bool random, const char* tau_block,
                           Eigen::Index draw, const std::string& label) {
  Rng rng = make_rng(derive_seed(task.seed, tag_of("predict"),
                                 tag_of(stream_tag),
                                 static_cast<std::uint64_t>(draw),
                                 tag_of(label)));
  const double sd =
      random ? std::sqrt(task.draws(draw, task.layout.block(tau_block).offset))
             : task.spec.priors.fixed_effect_sd;
  return sd * draw_normal(rng);
}

inline int level_index(const std::map<std::string, int>& levels,
                       const std::string& label) {
  auto it = levels.find(label);
  return it == levels.end() ? -1 : it->second;
}

}  // namespace detail

// Posterior draws of the future effect theta~_j, one row per pooled draw.
inline Eigen::MatrixXd predict_theta(const PredictionTask& task) {
  const Dataset& test = *task.test;
  const auto n_draws = task.draws.rows();
  const auto m_te = static_cast<Eigen::Index>(test.size());
  const int q = test.num_covariates();
  const ParamLayout& lay = task.layout;
  const bool re = mean_effects_random(task.spec.kind);
  const bool gp = uses_gp(task.spec.kind);
  const bool monthly = uses_monthly_dummies(task.spec.kind);

  const int off_alpha = lay.block("alpha_theta").offset;
  const int off_ta = lay.block("theta_a").offset;
  const int off_tb = lay.block("theta_b").offset;
  const int off_beta = q > 0 ? lay.block("beta_theta").offset : -1;
  const int off_tc = (gp || monthly) ? lay.block("theta_c").offset : -1;

  // GP models: partition test times into reused training-grid times and
  // genuinely new times that need draw-wise conditioning.
  std::vector<double> new_times;
  std::vector<int> grid_index(test.size(), -1);  // >=0: train grid column
  std::vector<int> new_index(test.size(), -1);   // >=0: column in new_times
  if (gp) {
    for (std::size_t j = 0; j < test.size(); ++j) {
      const double t = test.records()[j].t;
      auto it = std::lower_bound(task.train_time_grid.begin(),
                                 task.train_time_grid.end(), t);
      if (it != task.train_time_grid.end() && *it == t) {
        grid_index[j] = static_cast<int>(it - task.train_time_grid.begin());
      } else {
        auto nt = std::find(new_times.begin(), new_times.end(), t);
        if (nt == new_times.end()) {
          new_times.push_back(t);
          new_index[j] = static_cast<int>(new_times.size()) - 1;
        } else {
          new_index[j] = static_cast<int>(nt - new_times.begin());
        }
      }
    }
  }

  const int Lc = off_tc >= 0 ? lay.block("theta_c").len : 0;
  Eigen::MatrixXd out(n_draws, m_te);
  for (Eigen::Index d = 0; d < n_draws; ++d) {
    Eigen::VectorXd theta_c_new;
    if (gp && !new_times.empty()) {
      KernelParams kp{task.draws(d, lay.block("sigma_p2").offset),
                      task.draws(d, lay.block("l_p").offset), task.spec.p_e};
      std::vector<double> vals(static_cast<std::size_t>(Lc));
      for (int l = 0; l < Lc; ++l)
        vals[static_cast<std::size_t>(l)] = task.draws(d, off_tc + l);
      auto cond =
          gp_condition(task.train_time_grid, vals, new_times, kp);
      Rng rng = make_rng(derive_seed(task.seed, tag_of("predict"),
                                     tag_of("gp"),
                                     static_cast<std::uint64_t>(d)));
      theta_c_new = detail::sample_mvn(cond.mean, cond.cov, rng);
    }
    for (Eigen::Index j = 0; j < m_te; ++j) {
      const auto& r = test.records()[static_cast<std::size_t>(j)];
      const int a = detail::level_index(task.train_levels.group_a, r.group_a);
      const int b = detail::level_index(task.train_levels.group_b, r.group_b);
      double v = task.draws(d, off_alpha);
      v += a >= 0 ? task.draws(d, off_ta + a)
                  : detail::fresh_effect(task, "group_a", re, "tau_a2", d,
                                         r.group_a);
      v += b >= 0 ? task.draws(d, off_tb + b)
                  : detail::fresh_effect(task, "group_b", re, "tau_b2", d,
                                         r.group_b);
      if (monthly) v += task.draws(d, off_tc + month_index(r.t));
      if (gp)
        v += grid_index[static_cast<std::size_t>(j)] >= 0
                 ? task.draws(d, off_tc + grid_index[static_cast<std::size_t>(j)])
                 : theta_c_new(new_index[static_cast<std::size_t>(j)]);
      for (int c = 0; c < q; ++c)
        v += task.draws(d, off_beta + c) * r.x[static_cast<std::size_t>(c)];
      out(d, j) = v;
    }
  }
  return out;
}

// Posterior draws of the future sampling variance sigma~_j^2. Models without
// the variance layer fall back to the pooled mean of the training S_i^2.
inline Eigen::MatrixXd predict_sigma2(const PredictionTask& task) {
  const Dataset& test = *task.test;
  const auto n_draws = task.draws.rows();
  const auto m_te = static_cast<Eigen::Index>(test.size());
  Eigen::MatrixXd out(n_draws, m_te);
  if (!task.spec.variance_model()) {
    out.setConstant(task.train_mean_s2);
    return out;
  }
  const ParamLayout& lay = task.layout;
  const int q = test.num_covariates();
  const bool re = var_effects_random(task.spec.kind);
  const int off_as = lay.block("alpha_sigma").offset;
  const int off_da = lay.block("delta_a").offset;
  const int off_db = lay.block("delta_b").offset;
  const int off_bs = q > 0 ? lay.block("beta_sigma").offset : -1;
  const int off_te = lay.block("tau_sigma2").offset;

  for (Eigen::Index d = 0; d < n_draws; ++d) {
    const double tau_sd = std::sqrt(task.draws(d, off_te));
    for (Eigen::Index j = 0; j < m_te; ++j) {
      const auto& r = test.records()[static_cast<std::size_t>(j)];
      if (r.n < 2) throw ContractError("test record without a sample size");
      const int a = detail::level_index(task.train_levels.group_a, r.group_a);
      const int b = detail::level_index(task.train_levels.group_b, r.group_b);
      double mu = task.draws(d, off_as);
      mu += a >= 0 ? task.draws(d, off_da + a)
                   : detail::fresh_effect(task, "delta_a", re, "tau_c2", d,
                                          r.group_a);
      mu += b >= 0 ? task.draws(d, off_db + b)
                   : detail::fresh_effect(task, "delta_b", re, "tau_d2", d,
                                          r.group_b);
      for (int c = 0; c < q; ++c)
        mu += task.draws(d, off_bs + c) * r.x[static_cast<std::size_t>(c)];
      mu -= std::log(static_cast<double>(r.n));
      Rng rng = make_rng(derive_seed(task.seed, tag_of("predict"),
                                     tag_of("sigma2"),
                                     static_cast<std::uint64_t>(d),
                                     static_cast<std::uint64_t>(j)));
      out(d, j) = std::exp(mu + tau_sd * draw_normal(rng));
    }
  }
  return out;
}

// y~_j ~ N(theta~_j, sigma~_j^2), draw by draw.
inline Eigen::MatrixXd predict_y(const PredictionTask& task,
                                 const Eigen::MatrixXd& theta,
                                 const Eigen::MatrixXd& sigma2) {
  if (theta.rows() != sigma2.rows() || theta.cols() != sigma2.cols())
    throw ContractError("predict_y: theta/sigma2 shape mismatch");
  Eigen::MatrixXd out(theta.rows(), theta.cols());
  for (Eigen::Index d = 0; d < theta.rows(); ++d)
    for (Eigen::Index j = 0; j < theta.cols(); ++j) {
      Rng rng = make_rng(derive_seed(task.seed, tag_of("predict"),
                                     tag_of("y"),
                                     static_cast<std::uint64_t>(d),
                                     static_cast<std::uint64_t>(j)));
      out(d, j) = theta(d, j) + std::sqrt(sigma2(d, j)) * draw_normal(rng);
    }
  return out;
}

}  // namespace stream

#endif
