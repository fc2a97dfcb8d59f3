#ifndef STREAM_DATA_HPP
#define STREAM_DATA_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stream/errors.hpp"

namespace stream {

struct ExperimentRecord {
  std::string id;
  double y = 0.0;      // effect estimate
  double s2 = 0.0;     // estimated sampling variance of y
  long n = 0;          // sample size, >= 2
  double t = 0.0;      // time stamp (period units, e.g. months)
  std::string group_a;
  std::string group_b;
  std::vector<double> x;  // covariates, length q
};

struct LevelMaps {
  std::map<std::string, int> group_a;  // label -> index, size J
  std::map<std::string, int> group_b;  // label -> index, size K
  std::vector<double> times;           // distinct times, strictly ascending, size L
};

class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<ExperimentRecord> records, LevelMaps maps)
      : records_(std::move(records)), maps_(std::move(maps)) {
    validate();
  }

  // Builds level maps from the records themselves.
  static Dataset from_records(std::vector<ExperimentRecord> records) {
    LevelMaps maps;
    std::vector<double> ts;
    for (const auto& r : records) {
      maps.group_a.emplace(r.group_a, 0);
      maps.group_b.emplace(r.group_b, 0);
      ts.push_back(r.t);
    }
    int j = 0;
    for (auto& [label, idx] : maps.group_a) idx = j++;
    int k = 0;
    for (auto& [label, idx] : maps.group_b) idx = k++;
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    maps.times = std::move(ts);
    return Dataset(std::move(records), std::move(maps));
  }

  const std::vector<ExperimentRecord>& records() const { return records_; }
  const LevelMaps& level_maps() const { return maps_; }
  std::size_t size() const { return records_.size(); }
  int num_groups_a() const { return static_cast<int>(maps_.group_a.size()); }
  int num_groups_b() const { return static_cast<int>(maps_.group_b.size()); }
  int num_times() const { return static_cast<int>(maps_.times.size()); }
  int num_covariates() const {
    return records_.empty() ? 0 : static_cast<int>(records_.front().x.size());
  }

  int group_a_index(const ExperimentRecord& r) const {
    auto it = maps_.group_a.find(r.group_a);
    return it == maps_.group_a.end() ? -1 : it->second;
  }
  int group_b_index(const ExperimentRecord& r) const {
    auto it = maps_.group_b.find(r.group_b);
    return it == maps_.group_b.end() ? -1 : it->second;
  }
  // Index into the distinct-time grid; -1 if t was not seen at map build time.
  int time_index(double t) const {
    auto it = std::lower_bound(maps_.times.begin(), maps_.times.end(), t);
    if (it == maps_.times.end() || *it != t) return -1;
    return static_cast<int>(it - maps_.times.begin());
  }

 private:
  void validate() const {
    if (records_.empty()) throw DataError("dataset has no records");
    std::size_t q = records_.front().x.size();
    for (std::size_t i = 0; i < records_.size(); ++i) {
      const auto& r = records_[i];
      if (r.s2 <= 0.0)
        throw DataError("record " + std::to_string(i) + ": s2 must be > 0");
      if (r.n < 2)
        throw DataError("record " + std::to_string(i) + ": n must be >= 2");
      if (r.x.size() != q)
        throw DataError("record " + std::to_string(i) +
                        ": inconsistent covariate length");
    }
    for (std::size_t l = 1; l < maps_.times.size(); ++l)
      if (!(maps_.times[l - 1] < maps_.times[l]))
        throw DataError("time grid not strictly increasing");
  }

  std::vector<ExperimentRecord> records_;
  LevelMaps maps_;
};

struct DesignMatrices {
  Eigen::MatrixXd Za;       // m x J one-hot
  Eigen::MatrixXd Zb;       // m x K one-hot
  Eigen::MatrixXd Zc;       // m x L one-hot over the time grid
  Eigen::MatrixXd X;        // m x q
  Eigen::VectorXd offsets;  // log n_i
};

// Var(log y) ~= Var(y) / y^2.
inline std::pair<double, double> delta_log_transform(double y, double s2) {
  if (y <= 0.0) throw DataError("delta log transform requires y > 0");
  if (s2 <= 0.0) throw DataError("delta log transform requires s2 > 0");
  return {std::log(y), s2 / (y * y)};
}

inline DesignMatrices build_design(const Dataset& d) {
  const auto m = static_cast<Eigen::Index>(d.size());
  const int J = d.num_groups_a(), K = d.num_groups_b(), L = d.num_times();
  const int q = d.num_covariates();
  DesignMatrices dm;
  dm.Za = Eigen::MatrixXd::Zero(m, J);
  dm.Zb = Eigen::MatrixXd::Zero(m, K);
  dm.Zc = Eigen::MatrixXd::Zero(m, L);
  dm.X = Eigen::MatrixXd::Zero(m, q);
  dm.offsets = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& r = d.records()[static_cast<std::size_t>(i)];
    dm.Za(i, d.group_a_index(r)) = 1.0;
    dm.Zb(i, d.group_b_index(r)) = 1.0;
    dm.Zc(i, d.time_index(r.t)) = 1.0;
    for (int c = 0; c < q; ++c) dm.X(i, c) = r.x[static_cast<std::size_t>(c)];
    dm.offsets(i) = std::log(static_cast<double>(r.n));
  }
  return dm;
}

// Test set = the ceil(m * (1 - train_fraction)) records with the largest t,
// ties broken by descending input order. Both halves keep the parent's
// level maps so indices stay aligned.
inline std::pair<Dataset, Dataset> split_by_time(const Dataset& d,
                                                 double train_fraction) {
  const std::size_t m = d.size();
  if (m < 2) throw DataError("split requires at least 2 records");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw DataError("train_fraction must be in (0, 1)");
  const auto n_test = static_cast<std::size_t>(
      std::ceil(static_cast<double>(m) * (1.0 - train_fraction)));
  if (n_test == 0 || n_test >= m)
    throw DataError("split leaves an empty train or test set");

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (d.records()[a].t != d.records()[b].t)
      return d.records()[a].t > d.records()[b].t;
    return a > b;  // equal times: later input rows go to the test side first
  });
  std::vector<bool> in_test(m, false);
  for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = true;

  std::vector<ExperimentRecord> train, test;
  for (std::size_t i = 0; i < m; ++i)
    (in_test[i] ? test : train).push_back(d.records()[i]);
  return {Dataset(std::move(train), d.level_maps()),
          Dataset(std::move(test), d.level_maps())};
}

struct CsvSchema {
  std::string y = "y";
  std::string s2 = "s2";
  std::string n = "n";
  std::string t = "t";
  std::string group_a = "group_a";
  std::string group_b = "group_b";
  std::string id = "id";           // optional column
  std::string x_prefix = "x";      // covariate columns: x1..xq
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' '))
      cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_double(const std::string& cell, const std::string& col,
                           std::size_t row) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != cell.size() || cell.empty())
    throw DataError("row " + std::to_string(row) + ": non-numeric value '" +
                    cell + "' in column " + col);
  return v;
}

}  // namespace detail

inline Dataset load_dataset(const std::string& path,
                            const CsvSchema& schema = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  auto header = detail::split_csv_line(line);

  auto find_col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  auto require_col = [&](const std::string& name) {
    int c = find_col(name);
    if (c < 0) throw DataError(path + ": missing column '" + name + "'");
    return c;
  };
  const int cy = require_col(schema.y), cs2 = require_col(schema.s2);
  const int cn = require_col(schema.n), ct = require_col(schema.t);
  const int cga = require_col(schema.group_a), cgb = require_col(schema.group_b);
  const int cid = find_col(schema.id);

  // covariate columns discovered by prefix: x1, x2, ... in numeric order
  std::vector<int> xcols;
  for (int xi = 1;; ++xi) {
    int c = find_col(schema.x_prefix + std::to_string(xi));
    if (c < 0) break;
    xcols.push_back(c);
  }

  std::vector<ExperimentRecord> records;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() < header.size())
      throw DataError(path + ": row " + std::to_string(row) +
                      " has too few cells");
    ExperimentRecord r;
    r.id = cid >= 0 ? cells[static_cast<std::size_t>(cid)]
                    : std::to_string(row);
    r.y = detail::parse_double(cells[static_cast<std::size_t>(cy)], schema.y, row);
    r.s2 = detail::parse_double(cells[static_cast<std::size_t>(cs2)], schema.s2, row);
    double n_raw =
        detail::parse_double(cells[static_cast<std::size_t>(cn)], schema.n, row);
    r.n = static_cast<long>(std::llround(n_raw));
    r.t = detail::parse_double(cells[static_cast<std::size_t>(ct)], schema.t, row);
    r.group_a = cells[static_cast<std::size_t>(cga)];
    r.group_b = cells[static_cast<std::size_t>(cgb)];
    for (int c : xcols)
      r.x.push_back(detail::parse_double(cells[static_cast<std::size_t>(c)],
                                         schema.x_prefix, row));
    if (r.s2 <= 0.0)
      throw DataError(path + ": row " + std::to_string(row) + ": s2 must be > 0");
    if (r.n < 2)
      throw DataError(path + ": row " + std::to_string(row) + ": n must be >= 2");
    records.push_back(std::move(r));
  }
  return Dataset::from_records(std::move(records));
}

}  // namespace stream

#endif
