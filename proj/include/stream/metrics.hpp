#ifndef STREAM_METRICS_HPP
#define STREAM_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "stream/errors.hpp"

namespace stream {

// (100/n) sum |(theta_i - yhat_i) / theta_i|
inline double mape(const std::vector<double>& truth,
                   const std::vector<double>& pred) {
  if (truth.size() != pred.size() || truth.empty())
    throw ContractError("mape: length mismatch or empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 0.0) throw DataError("mape: zero truth entry");
    acc += std::abs((truth[i] - pred[i]) / truth[i]);
  }
  return 100.0 * acc / static_cast<double>(truth.size());
}

// (1/n) sum (theta_i - yhat_i)^2 / theta_i^2
inline double scaled_mse(const std::vector<double>& truth,
                         const std::vector<double>& pred) {
  if (truth.size() != pred.size() || truth.empty())
    throw ContractError("scaled_mse: length mismatch or empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 0.0) throw DataError("scaled_mse: zero truth entry");
    const double r = (truth[i] - pred[i]) / truth[i];
    acc += r * r;
  }
  return acc / static_cast<double>(truth.size());
}

// Shortest contiguous window of ceil((1-alpha) n) sorted draws; ties go to
// the lowest start, so the endpoints are deterministic sample values.
inline std::pair<double, double> hpd_interval(std::vector<double> draws,
                                              double alpha) {
  if (draws.size() < 20) throw DataError("hpd_interval: need >= 20 draws");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DataError("hpd_interval: alpha must be in (0, 1)");
  std::sort(draws.begin(), draws.end());
  const auto n = draws.size();
  const auto k = static_cast<std::size_t>(
      std::ceil((1.0 - alpha) * static_cast<double>(n)));
  if (k >= n) return {draws.front(), draws.back()};
  std::size_t best = 0;
  double best_width = draws[k - 1] - draws[0];
  for (std::size_t s = 1; s + k <= n; ++s) {
    const double w = draws[s + k - 1] - draws[s];
    if (w < best_width) {
      best_width = w;
      best = s;
    }
  }
  return {draws[best], draws[best + k - 1]};
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw ContractError("median of empty vector");
  const auto n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  double hi = v[n / 2];
  if (n % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.end());
  return 0.5 * (v[n / 2 - 1] + hi);
}

// (1/n) sum [(u - l) + (2/alpha)(l - t) 1{t < l} + (2/alpha)(t - u) 1{t > u}]
inline double interval_score(const std::vector<double>& truth,
                             const std::vector<double>& lower,
                             const std::vector<double>& upper, double alpha) {
  if (truth.size() != lower.size() || truth.size() != upper.size() ||
      truth.empty())
    throw ContractError("interval_score: length mismatch or empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (lower[i] > upper[i])
      throw ContractError("interval_score: lower > upper");
    acc += upper[i] - lower[i];
    if (truth[i] < lower[i]) acc += 2.0 / alpha * (lower[i] - truth[i]);
    if (truth[i] > upper[i]) acc += 2.0 / alpha * (truth[i] - upper[i]);
  }
  return acc / static_cast<double>(truth.size());
}

struct ScoreReport {
  double mape = 0.0;
  double scaled_mse = 0.0;
  double interval_score = 0.0;
  double alpha = 0.05;
  int n_eval = 0;
};

}  // namespace stream

#endif
