#include "gdkd/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace gdkd {

namespace {
using EigenMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using EigenMapMut = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
}  // namespace

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

void Matrix::scale(double s) {
  for (double& v : data_) v *= s;
}

void Matrix::axpy(double s, const Matrix& other) {
  require(rows_ == other.rows_ && cols_ == other.cols_, "Matrix::axpy: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
}

double Matrix::max_abs_diff(const Matrix& other) const {
  require(rows_ == other.rows_ && cols_ == other.cols_, "Matrix::max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b, bool transpose_a, bool transpose_b) {
  const std::size_t ar = transpose_a ? a.cols() : a.rows();
  const std::size_t ac = transpose_a ? a.rows() : a.cols();
  const std::size_t br = transpose_b ? b.cols() : b.rows();
  const std::size_t bc = transpose_b ? b.rows() : b.cols();
  require(ac == br, "matmul: inner dimensions differ (" + std::to_string(ac) + " vs " + std::to_string(br) + ")");

  Matrix c(ar, bc);
  EigenMap ma(a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  EigenMap mb(b.data(), static_cast<Eigen::Index>(b.rows()), static_cast<Eigen::Index>(b.cols()));
  EigenMapMut mc(c.data(), static_cast<Eigen::Index>(ar), static_cast<Eigen::Index>(bc));
  if (!transpose_a && !transpose_b)
    mc.noalias() = ma * mb;
  else if (transpose_a && !transpose_b)
    mc.noalias() = ma.transpose() * mb;
  else if (!transpose_a && transpose_b)
    mc.noalias() = ma * mb.transpose();
  else
    mc.noalias() = ma.transpose() * mb.transpose();
  return c;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "hcat: row counts differ");
  Matrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto out = c.row(r);
    auto ra = a.row(r);
    auto rb = b.row(r);
    std::copy(ra.begin(), ra.end(), out.begin());
    std::copy(rb.begin(), rb.end(), out.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double s, std::span<const double> x, std::span<double> y) {
  require(x.size() == y.size(), "axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "squared_distance: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace gdkd
