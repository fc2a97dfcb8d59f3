#ifndef STREAM_LOGDENSITY_HPP
#define STREAM_LOGDENSITY_HPP

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stream/data.hpp"
#include "stream/errors.hpp"
#include "stream/kernel.hpp"
#include "stream/model.hpp"

namespace stream {

inline constexpr double kLog2Pi = 1.8378770664093454836;

inline double normal_lpdf(double x, double mu, double var) {
  const double r = x - mu;
  return -0.5 * (kLog2Pi + std::log(var)) - r * r / (2.0 * var);
}

// Half-Cauchy(eta) density of p = exp(u), including the log-Jacobian u.
inline double half_cauchy_lpdf_log(double u, double eta) {
  const double p2 = std::exp(2.0 * u);
  return std::log(2.0 / (M_PI * eta)) - std::log1p(p2 / (eta * eta)) + u;
}
inline double half_cauchy_grad_log(double u, double eta) {
  const double p2 = std::exp(2.0 * u);
  if (!std::isfinite(p2)) return -1.0;
  return 1.0 - 2.0 * p2 / (eta * eta + p2);
}

// Month-of-year index in [0, 12): ((round(t) - 1) mod 12). Future test times
// wrap onto the same dummies the training months used.
inline int month_index(double t) {
  long r = std::lround(t) - 1;
  r %= 12;
  if (r < 0) r += 12;
  return static_cast<int>(r);
}

// Joint log-posterior (and analytic gradient) over the flat unconstrained
// parameter vector, for any of the eight model kinds.
//
// Unconstrained conventions:
//   - variance-like parameters are logs (tau_*2, sigma_p2, l_p, sigma_i2);
//   - random-effect group blocks are standardized (value = scale * raw);
//   - the GP time effect is non-centered: the block holds z ~ N(0, I) and
//     theta_c = L z with L the jittered Cholesky factor of the kernel matrix.
//     (The periodic kernel makes times a full period apart perfectly
//     correlated, so the centered form is near-singular and unsamplable.)
class LogDensityModel {
 public:
  LogDensityModel(ModelSpec spec, const Dataset& d)
      : spec_(spec),
        m_(static_cast<int>(d.size())),
        J_(d.num_groups_a()),
        K_(d.num_groups_b()),
        q_(d.num_covariates()) {
    y_.resize(m_);
    s2_.resize(m_);
    logn_.resize(m_);
    half_df_.resize(m_);
    ai_.resize(static_cast<std::size_t>(m_));
    bi_.resize(static_cast<std::size_t>(m_));
    ci_.assign(static_cast<std::size_t>(m_), -1);
    X_.resize(m_, q_);

    if (uses_gp(spec_.kind)) {
      // theta_c lives on the distinct times of the fitted records
      for (const auto& r : d.records()) time_grid_.push_back(r.t);
      std::sort(time_grid_.begin(), time_grid_.end());
      time_grid_.erase(std::unique(time_grid_.begin(), time_grid_.end()),
                       time_grid_.end());
    } else if (uses_monthly_dummies(spec_.kind)) {
      for (int mm = 1; mm <= 12; ++mm) time_grid_.push_back(mm);
    }
    Lc_ = static_cast<int>(time_grid_.size());

    for (int i = 0; i < m_; ++i) {
      const auto& r = d.records()[static_cast<std::size_t>(i)];
      y_(i) = r.y;
      s2_(i) = r.s2;
      logn_(i) = std::log(static_cast<double>(r.n));
      half_df_(i) = 0.5 * static_cast<double>(r.n - 1);
      ai_[static_cast<std::size_t>(i)] = d.group_a_index(r);
      bi_[static_cast<std::size_t>(i)] = d.group_b_index(r);
      if (uses_gp(spec_.kind)) {
        auto it = std::lower_bound(time_grid_.begin(), time_grid_.end(), r.t);
        ci_[static_cast<std::size_t>(i)] =
            static_cast<int>(it - time_grid_.begin());
      } else if (uses_monthly_dummies(spec_.kind)) {
        ci_[static_cast<std::size_t>(i)] = month_index(r.t);
      }
      for (int c = 0; c < q_; ++c)
        X_(i, c) = r.x[static_cast<std::size_t>(c)];
    }
    build_layout();
  }

  const ParamLayout& layout() const { return layout_; }
  const ModelSpec& spec() const { return spec_; }
  const std::vector<double>& time_grid() const { return time_grid_; }
  int num_experiments() const { return m_; }

  // Test hook: drop the data terms, leaving the prior (incl. hierarchy layers).
  void set_include_likelihood(bool v) { include_likelihood_ = v; }

  // Data-informed chain start: jittered around the observed moments instead
  // of a blind U(-r, r) draw. sigma_i2 starts at log S_i^2 (the curvature
  // there scales with n_i, so a far-off start stalls step-size adaptation).
  template <typename RngT>
  Eigen::VectorXd initial_point(RngT& rng, double radius) const {
    const double j = radius / 20.0;
    std::uniform_real_distribution<double> u(-j, j);
    Eigen::VectorXd q(layout_.total);
    for (int i = 0; i < layout_.total; ++i) q(i) = u(rng);
    q(layout_.block("alpha_theta").offset) += y_.mean();
    if (spec_.variance_model()) {
      const auto& bw = layout_.block("sigma_i2");
      double acc = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double w = std::log(s2_(i));
        q(bw.offset + i) += w;
        acc += w + logn_(i);
      }
      q(layout_.block("alpha_sigma").offset) += acc / m_;
    }
    return q;
  }

  double log_posterior(const Eigen::VectorXd& u) const {
    double lp = 0.0;
    try {
      lp = eval(u, nullptr);
    } catch (const NumericalError&) {
      return -std::numeric_limits<double>::infinity();
    }
    return std::isfinite(lp) ? lp
                             : -std::numeric_limits<double>::infinity();
  }

  Eigen::VectorXd grad_log_posterior(const Eigen::VectorXd& u) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(layout_.total);
    eval(u, &g);
    for (const auto& b : layout_.blocks)
      for (int i = 0; i < b.len; ++i)
        if (!std::isfinite(g(b.offset + i)))
          throw NumericalError("non-finite gradient in block " + b.name);
    return g;
  }

  // Unconstrained -> constrained, same layout: logs exponentiate, random
  // group effects are re-centered by their scale.
  Eigen::VectorXd constrain(const Eigen::VectorXd& u) const {
    if (u.size() != layout_.total)
      throw ContractError("parameter vector length does not match layout");
    Eigen::VectorXd c = u;
    auto exp_block = [&](const char* name) {
      if (!layout_.has(name)) return;
      const auto& b = layout_.block(name);
      for (int i = 0; i < b.len; ++i) c(b.offset + i) = std::exp(u(b.offset + i));
    };
    auto scale_block = [&](const char* name, const char* tau_name) {
      const auto& b = layout_.block(name);
      const double s = std::exp(0.5 * u(layout_.block(tau_name).offset));
      for (int i = 0; i < b.len; ++i) c(b.offset + i) = s * u(b.offset + i);
    };
    if (mean_effects_random(spec_.kind)) {
      scale_block("theta_a", "tau_a2");
      scale_block("theta_b", "tau_b2");
    }
    if (spec_.variance_model() && var_effects_random(spec_.kind)) {
      scale_block("delta_a", "tau_c2");
      scale_block("delta_b", "tau_d2");
    }
    if (uses_gp(spec_.kind) && Lc_ > 0) {
      // GP block is non-centered: map z back to theta_c = L z
      const auto& b = layout_.block("theta_c");
      const KernelParams kp{std::exp(u(layout_.block("sigma_p2").offset)),
                            std::exp(u(layout_.block("l_p").offset)), spec_.p_e};
      const auto fac = factor_cov(time_grid_, kp);
      c.segment(b.offset, b.len) =
          Eigen::MatrixXd(fac.llt.matrixL()) * u.segment(b.offset, b.len);
    }
    exp_block("tau_a2");
    exp_block("tau_b2");
    exp_block("sigma_p2");
    exp_block("l_p");
    exp_block("tau_c2");
    exp_block("tau_d2");
    exp_block("tau_sigma2");
    exp_block("sigma_i2");
    return c;
  }

 private:
  void build_layout() {
    layout_.add("alpha_theta", 1);
    layout_.add("theta_a", J_);
    layout_.add("theta_b", K_);
    if (Lc_ > 0) layout_.add("theta_c", Lc_);
    if (q_ > 0) layout_.add("beta_theta", q_);
    if (mean_effects_random(spec_.kind)) {
      layout_.add("tau_a2", 1);
      layout_.add("tau_b2", 1);
    }
    if (uses_gp(spec_.kind)) {
      layout_.add("sigma_p2", 1);
      layout_.add("l_p", 1);
    }
    if (spec_.variance_model()) {
      layout_.add("alpha_sigma", 1);
      layout_.add("delta_a", J_);
      layout_.add("delta_b", K_);
      if (q_ > 0) layout_.add("beta_sigma", q_);
      if (var_effects_random(spec_.kind)) {
        layout_.add("tau_c2", 1);
        layout_.add("tau_d2", 1);
      }
      layout_.add("tau_sigma2", 1);
      layout_.add("sigma_i2", m_);
    }
  }

  // Shared core: returns log posterior; accumulates the gradient when g != 0.
  double eval(const Eigen::VectorXd& u, Eigen::VectorXd* g) const {
    if (u.size() != layout_.total)
      throw ContractError("parameter vector length does not match layout");
    const PriorConfig& pr = spec_.priors;
    const bool re_mean = mean_effects_random(spec_.kind);
    const bool gp = uses_gp(spec_.kind);
    const bool vm = spec_.variance_model();
    const bool re_var = vm && var_effects_random(spec_.kind);
    const double fv = pr.fixed_effect_sd * pr.fixed_effect_sd;

    const int off_alpha = layout_.block("alpha_theta").offset;
    const int off_ta = layout_.block("theta_a").offset;
    const int off_tb = layout_.block("theta_b").offset;
    const int off_tc = Lc_ > 0 ? layout_.block("theta_c").offset : -1;
    const int off_beta = q_ > 0 ? layout_.block("beta_theta").offset : -1;

    double lp = 0.0;

    // --- mean-side parameters -------------------------------------------
    const double alpha = u(off_alpha);
    double u_a = 0.0, u_b = 0.0, s_a = 1.0, s_b = 1.0;
    int off_taua = -1, off_taub = -1;
    if (re_mean) {
      off_taua = layout_.block("tau_a2").offset;
      off_taub = layout_.block("tau_b2").offset;
      u_a = u(off_taua);
      u_b = u(off_taub);
      s_a = std::exp(0.5 * u_a);
      s_b = std::exp(0.5 * u_b);
    }
    Eigen::VectorXd ta(J_), tb(K_);
    for (int j = 0; j < J_; ++j) ta(j) = (re_mean ? s_a : 1.0) * u(off_ta + j);
    for (int k = 0; k < K_; ++k) tb(k) = (re_mean ? s_b : 1.0) * u(off_tb + k);
    Eigen::VectorXd beta;
    if (q_ > 0) beta = u.segment(off_beta, q_);

    // GP kernel parameters and train-grid factorization
    int off_sp = -1, off_lp = -1;
    double u_s = 0.0, v_l = 0.0;
    KernelParams kp;
    Eigen::LLT<Eigen::MatrixXd> llt;
    if (gp) {
      off_sp = layout_.block("sigma_p2").offset;
      off_lp = layout_.block("l_p").offset;
      u_s = u(off_sp);
      v_l = u(off_lp);
      // reject absurd excursions outright: beyond exp(+-300) the kernel
      // matrix over/underflows (denormals make the Cholesky crawl), and the
      // half-Cauchy prior mass out there is below e^-300 anyway
      if (!(std::abs(u_s) < 300.0 && std::abs(v_l) < 300.0))
        throw NumericalError("kernel parameters out of range");
      kp = KernelParams{std::exp(u_s), std::exp(v_l), spec_.p_e};
      llt = factor_cov(time_grid_, kp).llt;
    }
    Eigen::VectorXd tc, zc;
    if (Lc_ > 0) {
      zc = u.segment(off_tc, Lc_);
      tc = gp ? (llt.matrixL() * zc).eval() : zc;
    }

    // --- variance-side parameters ---------------------------------------
    int off_asig = -1, off_da = -1, off_db = -1, off_bsig = -1;
    int off_tauc = -1, off_taud = -1, off_taue = -1, off_w = -1;
    double alpha_s = 0.0, u_c = 0.0, u_d = 0.0, u_e = 0.0;
    double s_c = 1.0, s_d = 1.0, tau_e2 = 1.0;
    Eigen::VectorXd da, db, beta_s;
    if (vm) {
      off_asig = layout_.block("alpha_sigma").offset;
      off_da = layout_.block("delta_a").offset;
      off_db = layout_.block("delta_b").offset;
      off_bsig = q_ > 0 ? layout_.block("beta_sigma").offset : -1;
      off_taue = layout_.block("tau_sigma2").offset;
      off_w = layout_.block("sigma_i2").offset;
      alpha_s = u(off_asig);
      if (re_var) {
        off_tauc = layout_.block("tau_c2").offset;
        off_taud = layout_.block("tau_d2").offset;
        u_c = u(off_tauc);
        u_d = u(off_taud);
        s_c = std::exp(0.5 * u_c);
        s_d = std::exp(0.5 * u_d);
      }
      u_e = u(off_taue);
      tau_e2 = std::exp(u_e);
      da.resize(J_);
      db.resize(K_);
      for (int j = 0; j < J_; ++j) da(j) = (re_var ? s_c : 1.0) * u(off_da + j);
      for (int k = 0; k < K_; ++k) db(k) = (re_var ? s_d : 1.0) * u(off_db + k);
      if (q_ > 0) beta_s = u.segment(off_bsig, q_);
    }

    // --- likelihood -------------------------------------------------------
    double d_alpha = 0.0, d_asig = 0.0;
    Eigen::VectorXd dta = Eigen::VectorXd::Zero(J_);
    Eigen::VectorXd dtb = Eigen::VectorXd::Zero(K_);
    Eigen::VectorXd dtc = Eigen::VectorXd::Zero(std::max(Lc_, 1));
    Eigen::VectorXd dbeta = Eigen::VectorXd::Zero(std::max(q_, 1));
    Eigen::VectorXd dda = Eigen::VectorXd::Zero(J_);
    Eigen::VectorXd ddb = Eigen::VectorXd::Zero(K_);
    Eigen::VectorXd dbsig = Eigen::VectorXd::Zero(std::max(q_, 1));
    double d_ue = 0.0;

    if (include_likelihood_) {
      for (int i = 0; i < m_; ++i) {
        const int a = ai_[static_cast<std::size_t>(i)];
        const int b = bi_[static_cast<std::size_t>(i)];
        const int c = ci_[static_cast<std::size_t>(i)];
        double theta = alpha + ta(a) + tb(b);
        if (c >= 0) theta += tc(c);
        if (q_ > 0) theta += X_.row(i).dot(beta);

        const double w = vm ? u(off_w + i) : 0.0;
        const double sigma2 = vm ? std::exp(w) : s2_(i);
        const double r = y_(i) - theta;
        lp += -0.5 * (kLog2Pi + std::log(sigma2)) - r * r / (2.0 * sigma2);

        double gtheta = 0.0;
        if (g) {
          gtheta = r / sigma2;
          d_alpha += gtheta;
          dta(a) += gtheta;
          dtb(b) += gtheta;
          if (c >= 0) dtc(c) += gtheta;
          if (q_ > 0) dbeta += gtheta * X_.row(i).transpose();
        }

        if (vm) {
          // S_i^2 | sigma_i^2 ~ Gamma((n-1)/2, (n-1)/(2 sigma_i^2))
          const double hd = half_df_(i);
          const double ew = std::exp(-w);
          lp += hd * (std::log(hd) - w) - std::lgamma(hd) +
                (hd - 1.0) * std::log(s2_(i)) - hd * s2_(i) * ew;
          // log sigma_i^2 ~ N(mu_i, tau_sigma^2)
          double mu = alpha_s + da(a) + db(b) - logn_(i);
          if (q_ > 0) mu += X_.row(i).dot(beta_s);
          const double rw = w - mu;
          lp += -0.5 * (kLog2Pi + u_e) - rw * rw / (2.0 * tau_e2);

          if (g) {
            const double dw = (-0.5 + r * r / (2.0 * sigma2))   // y term
                              + (-hd + hd * s2_(i) * ew)        // gamma term
                              - rw / tau_e2;                    // lognormal
            (*g)(off_w + i) += dw;
            const double dmu = rw / tau_e2;
            d_asig += dmu;
            dda(a) += dmu;
            ddb(b) += dmu;
            if (q_ > 0) dbsig += dmu * X_.row(i).transpose();
            d_ue += -0.5 + rw * rw / (2.0 * tau_e2);
          }
        }
      }
    }

    // --- priors and hierarchy layers -------------------------------------
    lp += normal_lpdf(alpha, pr.m_alpha_theta,
                      pr.s_alpha_theta * pr.s_alpha_theta);
    if (g)
      (*g)(off_alpha) = d_alpha - (alpha - pr.m_alpha_theta) /
                                      (pr.s_alpha_theta * pr.s_alpha_theta);
    for (int k = 0; k < q_; ++k) {
      const double sv = pr.beta_theta_sd(k) * pr.beta_theta_sd(k);
      lp += normal_lpdf(beta(k), pr.beta_theta_mean(k), sv);
      if (g)
        (*g)(off_beta + k) = dbeta(k) - (beta(k) - pr.beta_theta_mean(k)) / sv;
    }

    if (re_mean) {
      for (int j = 0; j < J_; ++j) {
        const double raw = u(off_ta + j);
        lp += -0.5 * (kLog2Pi + raw * raw);
        if (g) (*g)(off_ta + j) = s_a * dta(j) - raw;
      }
      for (int k = 0; k < K_; ++k) {
        const double raw = u(off_tb + k);
        lp += -0.5 * (kLog2Pi + raw * raw);
        if (g) (*g)(off_tb + k) = s_b * dtb(k) - raw;
      }
      lp += half_cauchy_lpdf_log(u_a, pr.eta_a);
      lp += half_cauchy_lpdf_log(u_b, pr.eta_b);
      if (g) {
        (*g)(off_taua) = 0.5 * dta.dot(ta) + half_cauchy_grad_log(u_a, pr.eta_a);
        (*g)(off_taub) = 0.5 * dtb.dot(tb) + half_cauchy_grad_log(u_b, pr.eta_b);
      }
    } else {
      for (int j = 0; j < J_; ++j) {
        lp += normal_lpdf(ta(j), 0.0, fv);
        if (g) (*g)(off_ta + j) = dta(j) - ta(j) / fv;
      }
      for (int k = 0; k < K_; ++k) {
        lp += normal_lpdf(tb(k), 0.0, fv);
        if (g) (*g)(off_tb + k) = dtb(k) - tb(k) / fv;
      }
    }

    if (Lc_ > 0 && !gp) {
      // monthly dummies: flat N(0, fixed_effect_sd^2)
      for (int l = 0; l < Lc_; ++l) {
        lp += normal_lpdf(tc(l), 0.0, fv);
        if (g) (*g)(off_tc + l) = dtc(l) - tc(l) / fv;
      }
    }
    if (gp) {
      // non-centered: z ~ N(0, I), theta_c = L z with C = L L^T
      lp += -0.5 * (Lc_ * kLog2Pi + zc.squaredNorm());
      lp += half_cauchy_lpdf_log(u_s, pr.eta_sigma);
      lp += half_cauchy_lpdf_log(v_l, pr.eta_l);
      if (g) {
        const Eigen::MatrixXd Lmat = llt.matrixL();
        g->segment(off_tc, Lc_) = Lmat.transpose() * dtc.head(Lc_) - zc;
        // L scales linearly in sigma_p (the jitter does too), so
        // d theta_c / d(log sigma_p^2) = theta_c / 2
        (*g)(off_sp) = 0.5 * dtc.head(Lc_).dot(tc) +
                       half_cauchy_grad_log(u_s, pr.eta_sigma);
        // dC/d(log l_p): entrywise K_ij * 4 sin^2(pi |dt| / p_e) / l_p^2;
        // then dL = L Phi(L^-1 dC L^-T) with Phi = tril, halved diagonal
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(Lc_, Lc_);
        for (int i = 0; i < Lc_; ++i)
          for (int j = 0; j < i; ++j) {
            const double dt = time_grid_[static_cast<std::size_t>(i)] -
                              time_grid_[static_cast<std::size_t>(j)];
            const double s = std::sin(M_PI * std::abs(dt) / kp.p_e);
            const double v = kernel_eval(time_grid_[static_cast<std::size_t>(i)],
                                         time_grid_[static_cast<std::size_t>(j)],
                                         kp) *
                             4.0 * s * s / (kp.l_p * kp.l_p);
            D(i, j) = v;
            D(j, i) = v;
          }
        Eigen::MatrixXd F = Lmat.triangularView<Eigen::Lower>().solve(
            Eigen::MatrixXd(Lmat.triangularView<Eigen::Lower>().solve(D))
                .transpose());
        Eigen::MatrixXd Phi = Eigen::MatrixXd::Zero(Lc_, Lc_);
        Phi.triangularView<Eigen::Lower>() = F.triangularView<Eigen::Lower>();
        Phi.diagonal() *= 0.5;
        (*g)(off_lp) = dtc.head(Lc_).dot(Lmat * (Phi * zc)) +
                       half_cauchy_grad_log(v_l, pr.eta_l);
      }
    }

    if (vm) {
      lp += normal_lpdf(alpha_s, pr.m_alpha_sigma,
                        pr.s_alpha_sigma * pr.s_alpha_sigma);
      if (g)
        (*g)(off_asig) = d_asig - (alpha_s - pr.m_alpha_sigma) /
                                      (pr.s_alpha_sigma * pr.s_alpha_sigma);
      for (int k = 0; k < q_; ++k) {
        const double sv = pr.beta_sigma_sd(k) * pr.beta_sigma_sd(k);
        lp += normal_lpdf(beta_s(k), pr.beta_sigma_mean(k), sv);
        if (g)
          (*g)(off_bsig + k) =
              dbsig(k) - (beta_s(k) - pr.beta_sigma_mean(k)) / sv;
      }
      if (re_var) {
        for (int j = 0; j < J_; ++j) {
          const double raw = u(off_da + j);
          lp += -0.5 * (kLog2Pi + raw * raw);
          if (g) (*g)(off_da + j) = s_c * dda(j) - raw;
        }
        for (int k = 0; k < K_; ++k) {
          const double raw = u(off_db + k);
          lp += -0.5 * (kLog2Pi + raw * raw);
          if (g) (*g)(off_db + k) = s_d * ddb(k) - raw;
        }
        lp += half_cauchy_lpdf_log(u_c, pr.eta_c);
        lp += half_cauchy_lpdf_log(u_d, pr.eta_d);
        if (g) {
          (*g)(off_tauc) =
              0.5 * dda.dot(da) + half_cauchy_grad_log(u_c, pr.eta_c);
          (*g)(off_taud) =
              0.5 * ddb.dot(db) + half_cauchy_grad_log(u_d, pr.eta_d);
        }
      } else {
        for (int j = 0; j < J_; ++j) {
          lp += normal_lpdf(da(j), 0.0, fv);
          if (g) (*g)(off_da + j) = dda(j) - da(j) / fv;
        }
        for (int k = 0; k < K_; ++k) {
          lp += normal_lpdf(db(k), 0.0, fv);
          if (g) (*g)(off_db + k) = ddb(k) - db(k) / fv;
        }
      }
      lp += half_cauchy_lpdf_log(u_e, pr.eta_e);
      if (g) (*g)(off_taue) = d_ue + half_cauchy_grad_log(u_e, pr.eta_e);
      // The lognormal layer on sigma_i2 is part of the hierarchy: when the
      // data terms are switched off it still has to be evaluated here.
      if (!include_likelihood_) {
        for (int i = 0; i < m_; ++i) {
          const int a = ai_[static_cast<std::size_t>(i)];
          const int b = bi_[static_cast<std::size_t>(i)];
          const double w = u(off_w + i);
          double mu = alpha_s + da(a) + db(b) - logn_(i);
          if (q_ > 0) mu += X_.row(i).dot(beta_s);
          const double rw = w - mu;
          lp += -0.5 * (kLog2Pi + u_e) - rw * rw / (2.0 * tau_e2);
          if (g) {
            (*g)(off_w + i) += -rw / tau_e2;
            const double dmu = rw / tau_e2;
            (*g)(off_asig) += dmu;
            (*g)(off_da + a) += (re_var ? s_c : 1.0) * dmu;
            (*g)(off_db + b) += (re_var ? s_d : 1.0) * dmu;
            if (re_var) {
              (*g)(off_tauc) += 0.5 * dmu * da(a);
              (*g)(off_taud) += 0.5 * dmu * db(b);
            }
            if (q_ > 0)
              g->segment(off_bsig, q_) += dmu * X_.row(i).transpose();
            (*g)(off_taue) += -0.5 + rw * rw / (2.0 * tau_e2);
          }
        }
      }
    }

    return lp;
  }

  ModelSpec spec_;
  int m_, J_, K_, q_, Lc_ = 0;
  Eigen::VectorXd y_, s2_, logn_, half_df_;
  std::vector<int> ai_, bi_, ci_;
  Eigen::MatrixXd X_;
  std::vector<double> time_grid_;
  ParamLayout layout_;
  bool include_likelihood_ = true;
};

}  // namespace stream

#endif
