#ifndef STREAM_IO_HPP
#define STREAM_IO_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stream/data.hpp"
#include "stream/errors.hpp"
#include "stream/sampler.hpp"
#include "stream/simulate.hpp"

namespace stream {

// All outputs go through temp-file + rename so partial files are never left
// behind.
inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- draw files -----------------------------------------------------------

inline std::string draws_chain_filename(int chain) {
  return "draws_chain" + std::to_string(chain + 1) + ".csv";
}

inline void write_draws_csv(const std::filesystem::path& dir,
                            const PosteriorDraws& draws) {
  for (std::size_t c = 0; c < draws.chains.size(); ++c) {
    std::ostringstream out;
    for (std::size_t k = 0; k < draws.names.size(); ++k)
      out << (k ? "," : "") << draws.names[k];
    out << "\n";
    const auto& mat = draws.chains[c].draws;
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
      for (Eigen::Index p = 0; p < mat.cols(); ++p)
        out << (p ? "," : "") << fmt_double(mat(r, p));
      out << "\n";
    }
    atomic_write(dir / draws_chain_filename(static_cast<int>(c)), out.str());
  }
}

struct DrawTable {
  std::vector<std::string> names;
  std::vector<Eigen::MatrixXd> chains;  // samples x P each
};

inline DrawTable read_draws_csv(const std::vector<std::string>& paths) {
  DrawTable table;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty draw file");
    auto header = detail::split_csv_line(line);
    if (table.names.empty())
      table.names = header;
    else if (table.names != header)
      throw DataError(path + ": parameter names differ between chain files");
    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      auto cells = detail::split_csv_line(line);
      if (cells.size() != header.size())
        throw DataError(path + ": ragged draw row");
      for (std::size_t i = 0; i < cells.size(); ++i)
        values.push_back(detail::parse_double(cells[i], header[i], rows + 1));
      ++rows;
    }
    Eigen::MatrixXd mat(rows, header.size());
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t p = 0; p < header.size(); ++p)
        mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(p)) =
            values[r * header.size() + p];
    table.chains.push_back(std::move(mat));
  }
  return table;
}

// Compact binary cache: carries the block layout so a fit can be reloaded
// for prediction without refitting.
inline void write_draws_bin(const std::filesystem::path& path,
                            const PosteriorDraws& draws) {
  std::ostringstream out(std::ios::binary);
  auto put_u32 = [&](std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
  };
  auto put_f64 = [&](double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
  };
  auto put_str = [&](const std::string& s) {
    put_u32(static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
  };
  out.write("STRMDRW1", 8);
  put_u32(static_cast<std::uint32_t>(draws.layout.blocks.size()));
  for (const auto& b : draws.layout.blocks) {
    put_str(b.name);
    put_u32(static_cast<std::uint32_t>(b.len));
  }
  put_u32(static_cast<std::uint32_t>(draws.chains.size()));
  for (const auto& c : draws.chains) {
    put_u32(static_cast<std::uint32_t>(c.draws.rows()));
    put_u32(static_cast<std::uint32_t>(c.draws.cols()));
    put_f64(c.accept_rate);
    put_f64(c.step_size);
    put_u32(static_cast<std::uint32_t>(c.divergences));
    for (Eigen::Index r = 0; r < c.draws.rows(); ++r)
      for (Eigen::Index p = 0; p < c.draws.cols(); ++p) put_f64(c.draws(r, p));
  }
  atomic_write(path, out.str());
}

inline PosteriorDraws read_draws_bin(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  auto get_u32 = [&]() {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
  };
  auto get_f64 = [&]() {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
  };
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 8) != "STRMDRW1")
    throw DataError(path.string() + ": not a draw cache file");
  PosteriorDraws draws;
  const auto n_blocks = get_u32();
  for (std::uint32_t i = 0; i < n_blocks; ++i) {
    const auto len = get_u32();
    std::string name(len, '\0');
    in.read(name.data(), len);
    const auto blen = get_u32();
    draws.layout.add(name, static_cast<int>(blen));
  }
  const auto n_chains = get_u32();
  for (std::uint32_t c = 0; c < n_chains; ++c) {
    ChainResult cr;
    const auto rows = get_u32();
    const auto cols = get_u32();
    cr.accept_rate = get_f64();
    cr.step_size = get_f64();
    cr.divergences = static_cast<int>(get_u32());
    cr.draws.resize(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r)
      for (std::uint32_t p = 0; p < cols; ++p) cr.draws(r, p) = get_f64();
    draws.chains.push_back(std::move(cr));
  }
  if (!in) throw DataError(path.string() + ": truncated draw cache");
  draws.names = draws.layout.flat_names();
  return draws;
}

// ---- dataset / truth / prediction files -----------------------------------

inline void write_dataset_csv(const std::filesystem::path& path,
                              const Dataset& d) {
  std::ostringstream out;
  const int q = d.num_covariates();
  out << "id,y,s2,n,t,group_a,group_b";
  for (int c = 0; c < q; ++c) out << ",x" << c + 1;
  out << "\n";
  for (const auto& r : d.records()) {
    out << r.id << "," << fmt_double(r.y) << "," << fmt_double(r.s2) << ","
        << r.n << "," << fmt_double(r.t) << "," << r.group_a << ","
        << r.group_b;
    for (double x : r.x) out << "," << fmt_double(x);
    out << "\n";
  }
  atomic_write(path, out.str());
}

inline void write_truth_csv(const std::filesystem::path& path,
                            const Dataset& d, const SimulatedTruth& truth) {
  std::ostringstream out;
  out << "id,theta_true,sigma2_true\n";
  for (std::size_t i = 0; i < d.size(); ++i)
    out << d.records()[i].id << "," << fmt_double(truth.theta[i]) << ","
        << fmt_double(truth.sigma2[i]) << "\n";
  atomic_write(path, out.str());
}

struct TruthTable {
  std::vector<std::string> id;
  std::vector<double> theta;
  std::vector<double> sigma2;
};

inline TruthTable read_truth_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  auto header = detail::split_csv_line(line);
  auto col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw DataError(path + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto cid = col("id"), cth = col("theta_true");
  auto csig = std::find(header.begin(), header.end(), "sigma2_true");
  TruthTable t;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row;
    auto cells = detail::split_csv_line(line);
    t.id.push_back(cells[cid]);
    t.theta.push_back(detail::parse_double(cells[cth], "theta_true", row));
    if (csig != header.end())
      t.sigma2.push_back(detail::parse_double(
          cells[static_cast<std::size_t>(csig - header.begin())],
          "sigma2_true", row));
  }
  return t;
}

inline void write_predictions_csv(const std::filesystem::path& path,
                                  const Dataset& test,
                                  const Eigen::MatrixXd& theta,
                                  const Eigen::MatrixXd& sigma2,
                                  const Eigen::MatrixXd& y) {
  std::ostringstream out;
  out << "test_id,draw,theta_tilde,sigma2_tilde,y_tilde\n";
  for (Eigen::Index j = 0; j < theta.cols(); ++j)
    for (Eigen::Index d = 0; d < theta.rows(); ++d)
      out << test.records()[static_cast<std::size_t>(j)].id << "," << d + 1
          << "," << fmt_double(theta(d, j)) << "," << fmt_double(sigma2(d, j))
          << "," << fmt_double(y(d, j)) << "\n";
  atomic_write(path, out.str());
}

}  // namespace stream

#endif
