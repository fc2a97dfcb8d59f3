#ifndef STREAM_KERNEL_HPP
#define STREAM_KERNEL_HPP

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stream/errors.hpp"

namespace stream {

struct KernelParams {
  double sigma_p2 = 1.0;  // kernel variance
  double l_p = 1.0;       // length-scale
  double p_e = 12.0;      // period length

  bool valid() const { return sigma_p2 > 0.0 && l_p > 0.0 && p_e > 0.0; }
};

// K(t, t') = sigma_p^2 * exp(-2 sin^2(pi |t - t'| / p_e) / l_p^2)
// Exponents below -40 are flushed to an exact zero: the value is < 5e-18
// relative to the diagonal (far below the jitter), and at tiny length-scales
// the denormal intermediates would otherwise make the Cholesky crawl.
inline double kernel_eval(double t, double t2, const KernelParams& kp) {
  const double s = std::sin(M_PI * std::abs(t - t2) / kp.p_e);
  const double e = -2.0 * s * s / (kp.l_p * kp.l_p);
  return e < -40.0 ? 0.0 : kp.sigma_p2 * std::exp(e);
}

inline Eigen::MatrixXd build_cov(const std::vector<double>& times,
                                 const KernelParams& kp, double jitter = 0.0) {
  const auto L = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd C(L, L);
  for (Eigen::Index i = 0; i < L; ++i) {
    C(i, i) = kp.sigma_p2 + jitter;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = kernel_eval(times[static_cast<std::size_t>(i)],
                                   times[static_cast<std::size_t>(j)], kp);
      C(i, j) = v;
      C(j, i) = v;
    }
  }
  return C;
}

// Default jitter schedule: 1e-8 * sigma_p2, escalating x10 up to 1e-4 * sigma_p2.
// Times one period apart make the covariance exactly singular, so some jitter
// is required for factorization.
struct CholeskyResult {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};

inline CholeskyResult factor_cov(const std::vector<double>& times,
                                 const KernelParams& kp) {
  double jitter = 1e-8 * kp.sigma_p2;
  const double max_jitter = 1e-4 * kp.sigma_p2;
  for (;; jitter *= 10.0) {
    Eigen::MatrixXd C = build_cov(times, kp, jitter);
    Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() == Eigen::Success) return {std::move(llt), jitter};
    if (jitter >= max_jitter)
      throw NumericalError("kernel matrix factorization failed at jitter " +
                           std::to_string(jitter));
  }
}

struct GaussianConditional {
  Eigen::VectorXd mean;  // length L'
  Eigen::MatrixXd cov;   // L' x L', symmetric PSD up to numerical slack
};

// Exact conditioning of the GP at test_times on observed values at
// train_times. Solves against the jittered Cholesky factor of the train
// block; never forms an explicit inverse. L = 0 returns the prior.
inline GaussianConditional gp_condition(const std::vector<double>& train_times,
                                        const std::vector<double>& train_values,
                                        const std::vector<double>& test_times,
                                        const KernelParams& kp) {
  if (!kp.valid()) throw ContractError("invalid kernel parameters");
  if (train_times.size() != train_values.size())
    throw ContractError("train times/values length mismatch");
  const auto L = static_cast<Eigen::Index>(train_times.size());
  const auto Lp = static_cast<Eigen::Index>(test_times.size());

  GaussianConditional out;
  if (L == 0) {
    out.mean = Eigen::VectorXd::Zero(Lp);
    out.cov = build_cov(test_times, kp);
    return out;
  }

  auto chol = factor_cov(train_times, kp);
  Eigen::MatrixXd cross(L, Lp);  // Phi_{L L'}
  for (Eigen::Index i = 0; i < L; ++i)
    for (Eigen::Index j = 0; j < Lp; ++j)
      cross(i, j) = kernel_eval(train_times[static_cast<std::size_t>(i)],
                                test_times[static_cast<std::size_t>(j)], kp);
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(
      train_values.data(), static_cast<Eigen::Index>(train_values.size()));

  Eigen::MatrixXd solved = chol.llt.solve(cross);  // Phi_LL^{-1} Phi_LL'
  out.mean = solved.transpose() * v;
  out.cov = build_cov(test_times, kp) - cross.transpose() * solved;
  out.cov = 0.5 * (out.cov + out.cov.transpose().eval());
  return out;
}

}  // namespace stream

#endif
