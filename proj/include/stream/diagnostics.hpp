#ifndef STREAM_DIAGNOSTICS_HPP
#define STREAM_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "stream/errors.hpp"

namespace stream {

// Classical (non-split) Gelman-Rubin potential scale reduction:
//   W = mean within-chain variance, B/n = variance of chain means,
//   Vhat = ((n-1)/n) W + B/n, Rhat = sqrt(Vhat / W).
inline double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) throw ContractError("gelman_rubin: need >= 2 chains");
  const std::size_t n = chains.front().size();
  if (n < 2) throw ContractError("gelman_rubin: chains must have length >= 2");
  for (const auto& c : chains)
    if (c.size() != n) throw ContractError("gelman_rubin: unequal chain lengths");

  const double nd = static_cast<double>(n);
  const double M = static_cast<double>(chains.size());
  double w = 0.0, grand = 0.0;
  std::vector<double> means;
  for (const auto& c : chains) {
    double mean = 0.0;
    for (double v : c) mean += v;
    mean /= nd;
    means.push_back(mean);
    grand += mean;
    double s2 = 0.0;
    for (double v : c) s2 += (v - mean) * (v - mean);
    w += s2 / (nd - 1.0);
  }
  w /= M;
  grand /= M;
  double b_over_n = 0.0;
  for (double mu : means) b_over_n += (mu - grand) * (mu - grand);
  b_over_n /= (M - 1.0);

  if (w == 0.0)
    return b_over_n == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double vhat = (nd - 1.0) / nd * w + b_over_n;
  return std::sqrt(vhat / w);
}

// Split-Rhat variant: each chain halved before the classical computation.
inline double gelman_rubin_split(const std::vector<std::vector<double>>& chains) {
  std::vector<std::vector<double>> halves;
  for (const auto& c : chains) {
    const std::size_t h = c.size() / 2;
    halves.emplace_back(c.begin(), c.begin() + static_cast<long>(h));
    halves.emplace_back(c.end() - static_cast<long>(h), c.end());
  }
  return gelman_rubin(halves);
}

struct ConvergenceReport {
  std::map<std::string, double> r_hat;
  double median_r_hat = 0.0;
  double max_r_hat = 0.0;
  double threshold = 1.1;
  bool converged = false;
};

inline ConvergenceReport convergence_report(
    const std::vector<std::string>& names,
    const std::vector<std::vector<std::vector<double>>>& per_param_chains,
    double threshold = 1.1, bool split = false) {
  if (names.size() != per_param_chains.size())
    throw ContractError("convergence_report: name/parameter count mismatch");
  ConvergenceReport rep;
  rep.threshold = threshold;
  std::vector<double> finite_sorted;
  bool any_nonfinite = false;
  double maxv = 0.0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double r = split ? gelman_rubin_split(per_param_chains[i])
                           : gelman_rubin(per_param_chains[i]);
    rep.r_hat[names[i]] = r;
    if (std::isfinite(r)) {
      finite_sorted.push_back(r);
      maxv = std::max(maxv, r);
    } else {
      any_nonfinite = true;
    }
  }
  std::sort(finite_sorted.begin(), finite_sorted.end());
  rep.median_r_hat =
      finite_sorted.empty()
          ? std::numeric_limits<double>::quiet_NaN()
          : finite_sorted[finite_sorted.size() / 2];
  rep.max_r_hat =
      any_nonfinite ? std::numeric_limits<double>::infinity() : maxv;
  rep.converged = !any_nonfinite && rep.max_r_hat <= threshold;
  return rep;
}

}  // namespace stream

#endif
