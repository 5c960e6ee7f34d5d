#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace monodyn {

using Vector = std::vector<double>;
using NodeSet = std::vector<int>;  // sorted, 0-based node indices

/// Dense row-major matrix. Small dimensions only; no expression templates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  Matrix submatrix(const NodeSet& rows, const NodeSet& cols) const;
  Matrix transpose() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double sup_norm(std::span<const double> x);
double sup_dist(std::span<const double> a, std::span<const double> b);
Vector sub(std::span<const double> a, std::span<const double> b);
Vector componentwise_min(std::span<const double> a, std::span<const double> b);
Vector restrict(std::span<const double> x, const NodeSet& nodes);

/// max_i (a_i - b_i); positive values measure how far a ≤ b fails.
double max_excess(std::span<const double> a, std::span<const double> b);

/// Row sums maximum, the operator norm induced by the sup-norm.
double inf_norm(const Matrix& a);

/// Solves a x = b by Gaussian elimination with partial pivoting. Throws
/// std::domain_error for a numerically singular system.
Vector solve(Matrix a, Vector b);

NodeSet complement(const NodeSet& nodes, int n);
NodeSet all_nodes(int n);

}  // namespace monodyn
