#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace swdelay {

using Vector = std::vector<double>;

/// Dense row-major real matrix. Public constructors reject non-finite entries.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix column(std::span<const double> values);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return entries_.empty(); }

  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

  std::span<const double> entries() const { return entries_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(entries_).subspan(i * cols_, cols_);
  }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

Matrix transpose(const Matrix& a);
/// Entrywise absolute value |A|.
Matrix abs(const Matrix& a);

/// Induced infinity norm: maximal absolute row sum.
double inf_norm(const Matrix& a);
double inf_norm(std::span<const double> x);

/// Keeps the diagonal and replaces off-diagonal entries by their absolute values.
Matrix metzlerize(const Matrix& a);
bool is_metzler(const Matrix& a);

/// a <= b + slack entrywise.
bool entrywise_leq(const Matrix& a, const Matrix& b, double slack = 0.0);
/// Every entry >= -slack.
bool is_nonnegative(const Matrix& a, double slack = 0.0);

inline constexpr double kDefaultPivotTolerance = 1e-12;

/// LU factorization with partial pivoting (PA = LU).
class LuDecomposition {
 public:
  /// Throws SingularMatrix when a pivot falls below
  /// relative_pivot_tolerance * inf_norm(a).
  explicit LuDecomposition(const Matrix& a,
                           double relative_pivot_tolerance = kDefaultPivotTolerance);

  Vector solve(std::span<const double> b) const;
  Matrix solve(const Matrix& b) const;
  Matrix inverse() const;
  double determinant() const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
};

Matrix invert(const Matrix& a, double relative_pivot_tolerance = kDefaultPivotTolerance);

/// Hurwitz test for Metzler matrices through the sign of the inverse:
/// a is Hurwitz iff it is invertible and -a^{-1} >= 0 (entries >= -tolerance).
/// Throws NotMetzler for non-Metzler input.
bool metzler_is_hurwitz(const Matrix& a, double tolerance = 1e-12);

}  // namespace swdelay
