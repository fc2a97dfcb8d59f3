#ifndef STREAM_TEST_HELPERS_HPP
#define STREAM_TEST_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "stream/data.hpp"
#include "stream/model.hpp"

namespace stream_test {

// Small random dataset: m experiments over J x K groups, L distinct integer
// times, one covariate.
inline stream::Dataset toy_dataset(std::uint64_t seed, int m = 6, int J = 3,
                                   int K = 2, int L = 4, int q = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uy(-2.0, 4.0);
  std::uniform_real_distribution<double> us2(0.05, 1.5);
  std::uniform_real_distribution<double> ux(1.0, 10.0);
  std::uniform_int_distribution<int> uj(0, J - 1), uk(0, K - 1), ul(0, L - 1);
  std::uniform_int_distribution<long> un(5, 500);
  std::vector<stream::ExperimentRecord> recs;
  for (int i = 0; i < m; ++i) {
    stream::ExperimentRecord r;
    r.id = "toy" + std::to_string(i);
    r.y = uy(rng);
    r.s2 = us2(rng);
    r.n = un(rng);
    r.t = 1.0 + 3.0 * ul(rng);  // times 1, 4, 7, 10, ...
    r.group_a = "a" + std::to_string(uj(rng));
    r.group_b = "b" + std::to_string(uk(rng));
    for (int c = 0; c < q; ++c) r.x.push_back(ux(rng));
    recs.push_back(std::move(r));
  }
  // make sure every group level and L distinct times actually appear
  for (int j = 0; j < J && j < m; ++j) recs[static_cast<std::size_t>(j)].group_a = "a" + std::to_string(j);
  for (int k = 0; k < K && k < m; ++k) recs[static_cast<std::size_t>(k)].group_b = "b" + std::to_string(k);
  for (int l = 0; l < L && l < m; ++l) recs[static_cast<std::size_t>(l)].t = 1.0 + 3.0 * l;
  return stream::Dataset::from_records(std::move(recs));
}

inline const std::vector<stream::ModelKind>& all_model_kinds() {
  static const std::vector<stream::ModelKind> kinds{
      stream::ModelKind::FE,    stream::ModelKind::FE_M,
      stream::ModelKind::FE_MV, stream::ModelKind::RE,
      stream::ModelKind::RE_M,  stream::ModelKind::RE_MV,
      stream::ModelKind::RE_GP, stream::ModelKind::STREAM};
  return kinds;
}

}  // namespace stream_test

#endif
