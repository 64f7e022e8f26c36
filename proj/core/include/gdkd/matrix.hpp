#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gdkd {

/// Dense row-major matrix of 64-bit floats.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  bool all_finite() const;
  Matrix transposed() const;

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }
  void scale(double s);
  /// this += s * other (shapes must match)
  void axpy(double s, const Matrix& other);

  double max_abs_diff(const Matrix& other) const;

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

/// c = op(a) * op(b); transpose_a/b select the op. Dimension mismatch throws.
Matrix matmul(const Matrix& a, const Matrix& b, bool transpose_a = false, bool transpose_b = false);

/// Horizontal concatenation [a | b]; row counts must match.
Matrix hcat(const Matrix& a, const Matrix& b);

// Small vector helpers used throughout the training loops.
using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double s, std::span<const double> x, std::span<double> y);
double squared_distance(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> v);

/// Throws std::invalid_argument with `what` unless cond holds.
void require(bool cond, const std::string& what);

}  // namespace gdkd
