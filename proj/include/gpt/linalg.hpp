#pragma once

#include <optional>
#include <vector>

#include "gpt/rational.hpp"

namespace gpt {

/// Dense row-major matrix over exact rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Scalar(0)) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols);
  static Matrix from_columns(const std::vector<Vec>& cols, std::size_t rows);
  /// Column vector times row covector.
  static Matrix outer(const Vec& column, const Vec& row);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec row(std::size_t i) const;
  Vec col(std::size_t j) const;

  Matrix transpose() const;
  bool is_zero() const;

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

Vec operator*(const Matrix& m, const Vec& x);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Scalar& s, const Matrix& m);

/// Covector times matrix: (c^T M)^T.
Vec covector_times(const Vec& c, const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

struct Rref {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form; zero rows are dropped from `reduced`.
Rref rref(const Matrix& m);
std::size_t rank(const Matrix& m);

/// Canonical basis of {x : m x = 0}, one vector per free column.
std::vector<Vec> nullspace(const Matrix& m);

/// Some solution of m x = b (free variables set to zero), or nothing.
std::optional<Vec> solve(const Matrix& m, const Vec& b);

std::optional<Matrix> inverse(const Matrix& m);

std::string to_string(const Matrix& m);

}  // namespace gpt
