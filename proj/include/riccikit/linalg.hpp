#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rk {

using Vec = std::vector<double>;

// Dense row-major matrix, sized for chart dimensions (m <= ~10), not for
// large-scale numerics.  Everything is by value; copies are cheap at these
// sizes.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}
  static Matrix identity(int n);
  static Matrix diag(std::span<const double> d);

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<double>& data() const { return data_; }

  Matrix transposed() const;
  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix scaled(double c) const;

  // Largest absolute entry; the norm used for residual reporting.
  double max_abs() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// LU determinant with partial pivoting.  Square input required.
double determinant(const Matrix& a);

// Gauss-Jordan inverse with partial pivoting.  Throws rk::degenerate_metric_error
// when a pivot falls below `pivot_tol` times the matrix scale.
Matrix inverse(const Matrix& a, double pivot_tol = 1e-13);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
// Used for signature checks and smallest-singular-value reports; input must
// be symmetric (the strict upper triangle is trusted).
std::vector<double> symmetric_eigenvalues(const Matrix& a);

// max_i |x_i - y_i|
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);

double dot(std::span<const double> x, std::span<const double> y);

// y = a * x for square a.
Vec mat_vec(const Matrix& a, std::span<const double> x);

// x^T a y (a square).
double bilinear(const Matrix& a, std::span<const double> x, std::span<const double> y);

}  // namespace rk
