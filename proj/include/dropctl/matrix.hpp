#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace dropctl {

/// Exact rational number; denominator kept positive and reduced by GMP.
using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "3", "-7/2" or "0.125" into an exact rational.
Rational parse_rational(const std::string& text);
/// Canonical "p/q" (or "p" when q = 1).
std::string to_string(const Rational& value);

/// Dense row-major matrix of exact rationals. Empty dimensions are allowed
/// (0 x n and n x 0 show up as blocks of trivial splits).
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RatMatrix identity(std::size_t n);
  static RatMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static RatMatrix column(const std::vector<Rational>& entries);
  static RatMatrix row(const std::vector<Rational>& entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  bool square() const noexcept { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const;
  RatMatrix transpose() const;
  RatMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  std::vector<Rational> col_vector(std::size_t c) const;
  std::vector<Rational> row_vector(std::size_t r) const;

  RatMatrix& operator+=(const RatMatrix& other);
  RatMatrix& operator-=(const RatMatrix& other);
  RatMatrix& operator*=(const Rational& scalar);

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RatMatrix operator+(RatMatrix a, const RatMatrix& b);
RatMatrix operator-(RatMatrix a, const RatMatrix& b);
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator*(RatMatrix a, const Rational& scalar);
std::vector<Rational> operator*(const RatMatrix& a, const std::vector<Rational>& v);

RatMatrix power(const RatMatrix& a, std::size_t k);
RatMatrix hstack(const RatMatrix& left, const RatMatrix& right);
RatMatrix vstack(const RatMatrix& top, const RatMatrix& bottom);
RatMatrix vstack(const std::vector<RatMatrix>& blocks, std::size_t cols);
RatMatrix hstack(const std::vector<RatMatrix>& blocks, std::size_t rows);
RatMatrix block_diag(const RatMatrix& a, const RatMatrix& b);

bool is_zero_vector(const std::vector<Rational>& v);

}  // namespace dropctl
