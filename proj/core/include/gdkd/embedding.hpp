#pragma once

#include "gdkd/matrix.hpp"

#include <optional>
#include <span>
#include <string>

namespace gdkd {

enum class Provenance { teacher, student, positional };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct StandardizeStats {
  Vec mean, stddev;  // per dimension; stddev 0 marks a constant dimension
};

/// Node representation matrix (one row per node) with a provenance tag and,
/// once standardized, the per-dimension stats that were removed.
struct EmbeddingSet {
  Matrix values;
  Provenance tag = Provenance::teacher;
  std::optional<StandardizeStats> stats;

  std::size_t n_nodes() const { return values.rows(); }
  std::size_t dim() const { return values.cols(); }
};

/// Population mean/std per dimension, over `rows` when given, else all rows.
StandardizeStats compute_standardize_stats(const Matrix& m, std::span<const std::uint32_t> rows = {});

/// (x - mean) / std per dimension; constant dimensions map to zero.
Matrix apply_standardize(const Matrix& m, const StandardizeStats& stats);

/// Zero-mean unit-variance copy with the removed stats recorded.
EmbeddingSet standardize(const EmbeddingSet& e);

// Text format: header "n d tag", then n rows of d floats.
void save_embeddings(const std::string& path, const EmbeddingSet& e);
EmbeddingSet load_embeddings(const std::string& path,
                             std::optional<std::size_t> expect_rows = std::nullopt);

/// load_embeddings + teacher tag enforcement; row-count mismatches and
/// non-finite entries throw, naming the row.
EmbeddingSet load_teacher_embeddings(const std::string& path,
                                     std::optional<std::size_t> expect_rows = std::nullopt);

}  // namespace gdkd
