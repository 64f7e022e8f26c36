#include "gdkd/embedding.hpp"

#include "gdkd/kv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gdkd {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::teacher: return "teacher";
    case Provenance::student: return "student";
    case Provenance::positional: return "positional";
  }
  throw std::logic_error("bad provenance");
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "teacher") return Provenance::teacher;
  if (s == "student") return Provenance::student;
  if (s == "positional") return Provenance::positional;
  throw std::runtime_error("unknown provenance tag '" + s + "'");
}

StandardizeStats compute_standardize_stats(const Matrix& m, std::span<const std::uint32_t> rows) {
  const std::size_t d = m.cols();
  std::vector<std::uint32_t> all;
  if (rows.empty()) {
    all.resize(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) all[i] = static_cast<std::uint32_t>(i);
    rows = all;
  }
  require(!rows.empty(), "compute_standardize_stats: no rows");

  StandardizeStats st;
  st.mean.assign(d, 0.0);
  st.stddev.assign(d, 0.0);
  const double n = static_cast<double>(rows.size());
  for (auto r : rows) {
    auto row = m.row(r);
    for (std::size_t j = 0; j < d; ++j) st.mean[j] += row[j];
  }
  for (std::size_t j = 0; j < d; ++j) st.mean[j] /= n;
  for (auto r : rows) {
    auto row = m.row(r);
    for (std::size_t j = 0; j < d; ++j) {
      const double c = row[j] - st.mean[j];
      st.stddev[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    st.stddev[j] = std::sqrt(st.stddev[j] / n);
    if (st.stddev[j] < 1e-300) st.stddev[j] = 0.0;
  }
  return st;
}

Matrix apply_standardize(const Matrix& m, const StandardizeStats& stats) {
  require(stats.mean.size() == m.cols(), "apply_standardize: stats dim mismatch");
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto src = m.row(r);
    auto dst = out.row(r);
    for (std::size_t j = 0; j < m.cols(); ++j)
      dst[j] = stats.stddev[j] == 0.0 ? 0.0 : (src[j] - stats.mean[j]) / stats.stddev[j];
  }
  return out;
}

EmbeddingSet standardize(const EmbeddingSet& e) {
  const StandardizeStats st = compute_standardize_stats(e.values);
  EmbeddingSet out;
  out.values = apply_standardize(e.values, st);
  out.tag = e.tag;
  out.stats = st;
  return out;
}

void save_embeddings(const std::string& path, const EmbeddingSet& e) {
  std::ostringstream os;
  os << e.values.rows() << " " << e.values.cols() << " " << to_string(e.tag) << "\n";
  for (std::size_t r = 0; r < e.values.rows(); ++r) {
    auto row = e.values.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) os << " ";
      os << format_double(row[j]);
    }
    os << "\n";
  }
  write_text_file(path, os.str());
}

EmbeddingSet load_embeddings(const std::string& path, std::optional<std::size_t> expect_rows) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open embedding file " + path);
  std::size_t n, d;
  std::string tag;
  if (!(is >> n >> d >> tag)) throw std::runtime_error(path + ": bad header, expected 'n d tag'");
  if (expect_rows && n != *expect_rows)
    throw std::runtime_error(path + ": has " + std::to_string(n) + " rows but the dataset has " +
                             std::to_string(*expect_rows) + " nodes");
  EmbeddingSet e;
  e.tag = provenance_from_string(tag);
  e.values = Matrix(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = e.values.row(r);
    for (std::size_t j = 0; j < d; ++j) {
      if (!(is >> row[j]))
        throw std::runtime_error(path + ": truncated at row " + std::to_string(r));
      if (!std::isfinite(row[j]))
        throw std::runtime_error(path + ": non-finite value at row " + std::to_string(r));
    }
  }
  return e;
}

EmbeddingSet load_teacher_embeddings(const std::string& path, std::optional<std::size_t> expect_rows) {
  EmbeddingSet e = load_embeddings(path, expect_rows);
  e.tag = Provenance::teacher;
  return e;
}

}  // namespace gdkd
