#include "dropctl/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "dropctl/error.hpp"

namespace dropctl {

// ---------------------------------------------------------------------------
// Rational helpers

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char ch : raw) {
    if (ch != ' ' && ch != '\t') text.push_back(ch);
  }
  if (text.empty()) fail(ErrorKind::parse, "empty number");
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  std::string body = text.substr(pos);
  auto all_digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  Rational value;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string num = body.substr(0, slash);
    std::string den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) fail(ErrorKind::parse, "malformed fraction '" + raw + "'");
    BigInt d(den, 10);
    if (d == 0) fail(ErrorKind::parse, "zero denominator in '" + raw + "'");
    value = Rational(BigInt(num, 10), d);
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    std::string whole = body.substr(0, dot);
    std::string frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
      fail(ErrorKind::parse, "malformed decimal '" + raw + "'");
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    value = Rational(BigInt(whole + frac, 10), scale);
  } else {
    if (!all_digits(body)) fail(ErrorKind::parse, "malformed number '" + raw + "'");
    value = Rational(BigInt(body, 10));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) {
  Rational canonical = value;
  canonical.canonicalize();
  return canonical.get_str();
}

// ---------------------------------------------------------------------------
// RatMatrix

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorKind::shape_mismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::column(const std::vector<Rational>& entries) {
  RatMatrix m(entries.size(), 1);
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, 0) = entries[i];
  return m;
}

RatMatrix RatMatrix::row(const std::vector<Rational>& entries) {
  RatMatrix m(1, entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(0, i) = entries[i];
  return m;
}

bool RatMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RatMatrix RatMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) fail(ErrorKind::shape_mismatch, "block out of range");
  RatMatrix b(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

std::vector<Rational> RatMatrix::col_vector(std::size_t c) const {
  std::vector<Rational> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

std::vector<Rational> RatMatrix::row_vector(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

RatMatrix& RatMatrix::operator+=(const RatMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) fail(ErrorKind::shape_mismatch, "matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

RatMatrix& RatMatrix::operator-=(const RatMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) fail(ErrorKind::shape_mismatch, "matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

RatMatrix& RatMatrix::operator*=(const Rational& scalar) {
  for (auto& q : data_) q *= scalar;
  return *this;
}

std::string RatMatrix::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) out << "; ";
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) out << ' ';
      out << (*this)(r, c).get_str();
    }
  }
  out << ']';
  return out.str();
}

RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
RatMatrix operator*(RatMatrix a, const Rational& scalar) { return a *= scalar; }

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorKind::shape_mismatch, "matrix product");
  RatMatrix p(a.rows(), b.cols());
  Rational tmp;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (sgn(b(k, j)) == 0) continue;
        tmp = aik * b(k, j);
        p(i, j) += tmp;
      }
    }
  }
  return p;
}

std::vector<Rational> operator*(const RatMatrix& a, const std::vector<Rational>& v) {
  if (a.cols() != v.size()) fail(ErrorKind::shape_mismatch, "matrix-vector product");
  std::vector<Rational> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * v[k];
  return out;
}

RatMatrix power(const RatMatrix& a, std::size_t k) {
  if (!a.square()) fail(ErrorKind::shape_mismatch, "power of a non-square matrix");
  RatMatrix result = RatMatrix::identity(a.rows());
  RatMatrix base = a;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

RatMatrix hstack(const RatMatrix& left, const RatMatrix& right) {
  if (left.rows() != right.rows()) fail(ErrorKind::shape_mismatch, "hstack row count");
  RatMatrix m(left.rows(), left.cols() + right.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < left.cols(); ++c) m(r, c) = left(r, c);
    for (std::size_t c = 0; c < right.cols(); ++c) m(r, left.cols() + c) = right(r, c);
  }
  return m;
}

RatMatrix vstack(const RatMatrix& top, const RatMatrix& bottom) {
  if (top.cols() != bottom.cols()) fail(ErrorKind::shape_mismatch, "vstack column count");
  RatMatrix m(top.rows() + bottom.rows(), top.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    for (std::size_t r = 0; r < top.rows(); ++r) m(r, c) = top(r, c);
    for (std::size_t r = 0; r < bottom.rows(); ++r) m(top.rows() + r, c) = bottom(r, c);
  }
  return m;
}

RatMatrix vstack(const std::vector<RatMatrix>& blocks, std::size_t cols) {
  std::size_t total = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) fail(ErrorKind::shape_mismatch, "vstack column count");
    total += b.rows();
  }
  RatMatrix m(total, cols);
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < cols; ++c) m(offset + r, c) = b(r, c);
    offset += b.rows();
  }
  return m;
}

RatMatrix hstack(const std::vector<RatMatrix>& blocks, std::size_t rows) {
  std::size_t total = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) fail(ErrorKind::shape_mismatch, "hstack row count");
    total += b.cols();
  }
  RatMatrix m(rows, total);
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) m(r, offset + c) = b(r, c);
    offset += b.cols();
  }
  return m;
}

RatMatrix block_diag(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) m(a.rows() + r, a.cols() + c) = b(r, c);
  return m;
}

bool is_zero_vector(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

// ---------------------------------------------------------------------------
// Elimination

namespace {

using IntMatrix = std::vector<std::vector<BigInt>>;

// Scales every row by the lcm of its denominators.
IntMatrix integer_rows(const RatMatrix& m) {
  IntMatrix out(m.rows(), std::vector<BigInt>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    BigInt l = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
    }
  }
  return out;
}

// Bareiss elimination in place. Returns the rank; `sign` tracks row swaps.
std::size_t bareiss(IntMatrix& a, std::size_t cols, int* sign) {
  const std::size_t rows = a.size();
  std::size_t rank = 0;
  BigInt prev = 1;
  int s = 1;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      std::swap(a[pivot], a[rank]);
      s = -s;
    }
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t c = col + 1; c < cols; ++c) {
        a[r][c] = a[r][c] * a[rank][col] - a[r][col] * a[rank][c];
        mpz_divexact(a[r][c].get_mpz_t(), a[r][c].get_mpz_t(), prev.get_mpz_t());
      }
      a[r][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  if (sign) *sign = s;
  return rank;
}

}  // namespace

std::size_t rank(const RatMatrix& m) {
  if (m.empty()) return 0;
  IntMatrix a = integer_rows(m);
  return bareiss(a, m.cols(), nullptr);
}

Rational determinant(const RatMatrix& m) {
  if (!m.square()) fail(ErrorKind::shape_mismatch, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  // det(m) = det(scaled) / prod(row scales)
  Rational scale = 1;
  IntMatrix a(n, std::vector<BigInt>(n));
  for (std::size_t r = 0; r < n; ++r) {
    BigInt l = 1;
    for (std::size_t c = 0; c < n; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < n; ++c) a[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
    scale *= Rational(l);
  }
  int sign = 1;
  if (bareiss(a, n, &sign) < n) return 0;
  Rational det(a[n - 1][n - 1]);
  if (sign < 0) det = -det;
  return det / scale;
}

RatMatrix rref(const RatMatrix& input, std::vector<std::size_t>* pivots) {
  RatMatrix m = input;
  std::vector<std::size_t> piv;
  std::size_t lead_row = 0;
  Rational factor;
  for (std::size_t col = 0; col < m.cols() && lead_row < m.rows(); ++col) {
    std::size_t p = lead_row;
    while (p < m.rows() && sgn(m(p, col)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != lead_row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(p, c), m(lead_row, c));
    }
    Rational inv = 1 / m(lead_row, col);
    for (std::size_t c = col; c < m.cols(); ++c) m(lead_row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead_row || sgn(m(r, col)) == 0) continue;
      factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= factor * m(lead_row, c);
    }
    piv.push_back(col);
    ++lead_row;
  }
  if (pivots) *pivots = std::move(piv);
  return m;
}

std::vector<std::vector<Rational>> kernel_basis(const RatMatrix& m) {
  std::vector<std::size_t> pivots;
  RatMatrix r = rref(m, &pivots);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols());
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

RatMatrix kernel_matrix(const RatMatrix& m) {
  auto basis = kernel_basis(m);
  RatMatrix k(m.cols(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < m.cols(); ++i) k(i, j) = basis[j][i];
  return k;
}

RatMatrix image_matrix(const RatMatrix& m) {
  std::vector<std::size_t> pivots;
  rref(m, &pivots);
  RatMatrix img(m.rows(), pivots.size());
  for (std::size_t j = 0; j < pivots.size(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) img(i, j) = m(i, pivots[j]);
  return img;
}

std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (!m.square()) fail(ErrorKind::shape_mismatch, "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  std::vector<std::size_t> pivots;
  RatMatrix r = rref(hstack(m, RatMatrix::identity(n)), &pivots);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) return std::nullopt;
  return r.block(0, n, n, n);
}

BigInt lcm_of_denominators(const RatMatrix& m) {
  BigInt l = 1;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
  return l;
}

// ---------------------------------------------------------------------------
// Subspace

Subspace Subspace::full(std::size_t n) { return from_rows(n, RatMatrix::identity(n)); }
Subspace Subspace::zero(std::size_t n) { return Subspace(n); }

Subspace Subspace::from_rows(std::size_t ambient, const RatMatrix& spanning_rows) {
  Subspace s(ambient);
  if (spanning_rows.rows() == 0) return s;
  std::vector<std::size_t> pivots;
  RatMatrix r = rref(spanning_rows, &pivots);
  s.basis_ = r.block(0, 0, pivots.size(), ambient);
  return s;
}

Subspace Subspace::span_columns(const RatMatrix& generators) {
  return from_rows(generators.rows(), generators.transpose());
}

Subspace Subspace::kernel_of(const RatMatrix& rows) {
  return span_columns(kernel_matrix(rows));
}

Subspace Subspace::intersect_kernel(const RatMatrix& constraint) const {
  if (constraint.cols() != ambient_) fail(ErrorKind::shape_mismatch, "subspace constraint width");
  if (is_zero()) return *this;
  RatMatrix v = columns();
  RatMatrix y = kernel_matrix(constraint * v);
  if (y.cols() == dim()) return *this;
  return span_columns(v * y);
}

Subspace Subspace::image_under(const RatMatrix& m) const {
  if (m.cols() != ambient_) fail(ErrorKind::shape_mismatch, "subspace image width");
  if (is_zero()) return zero(m.rows());
  return span_columns(m * columns());
}

Subspace Subspace::sum(const RatMatrix& generators) const {
  if (generators.rows() != ambient_) fail(ErrorKind::shape_mismatch, "subspace sum height");
  if (generators.cols() == 0) return *this;
  return from_rows(ambient_, vstack(basis_, generators.transpose()));
}

std::string Subspace::key() const { return std::to_string(ambient_) + ':' + basis_.to_string(); }

// ---------------------------------------------------------------------------
// Splits

InvariantSplit assemble_split(const RatMatrix& a, const RatMatrix& companion, Side side,
                              const RatMatrix& first_basis, const RatMatrix& second_basis) {
  const std::size_t n = a.rows();
  if (first_basis.cols() + second_basis.cols() != n)
    fail(ErrorKind::internal, "invariant subspaces are not complementary");
  RatMatrix t = hstack(first_basis, second_basis);
  auto t_inv = inverse(t);
  if (!t_inv) fail(ErrorKind::internal, "invariant subspaces are not complementary");
  const std::size_t d1 = first_basis.cols();
  const std::size_t d2 = n - d1;
  RatMatrix transformed = *t_inv * a * t;
  if (!transformed.block(0, d1, d1, d2).is_zero() || !transformed.block(d1, 0, d2, d1).is_zero())
    fail(ErrorKind::internal, "subspaces are not invariant under A");
  InvariantSplit s;
  s.basis = *t_inv;
  s.basis_inverse = t;
  s.dim1 = d1;
  s.first = transformed.block(0, 0, d1, d1);
  s.second = transformed.block(d1, d1, d2, d2);
  if (side == Side::output) {
    RatMatrix ct = companion * t;
    s.companion_first = ct.block(0, 0, ct.rows(), d1);
    s.companion_second = ct.block(0, d1, ct.rows(), d2);
  } else {
    RatMatrix tb = *t_inv * companion;
    s.companion_first = tb.block(0, 0, d1, tb.cols());
    s.companion_second = tb.block(d1, 0, d2, tb.cols());
  }
  return s;
}

RegularNilpotentSplit regular_nilpotent_split(const RatMatrix& a, const RatMatrix& companion,
                                              Side side) {
  if (!a.square()) fail(ErrorKind::shape_mismatch, "A must be square");
  const std::size_t n = a.rows();
  if (side == Side::output && companion.cols() != n) fail(ErrorKind::shape_mismatch, "C must have n columns");
  if (side == Side::input && companion.rows() != n) fail(ErrorKind::shape_mismatch, "B must have n rows");
  RatMatrix an = power(a, n);
  RatMatrix range = image_matrix(an);
  RatMatrix null = kernel_matrix(an);
  if (range.cols() + null.cols() != n)
    fail(ErrorKind::internal, "dim image(A^n) + dim ker(A^n) != n");
  RegularNilpotentSplit split;
  static_cast<InvariantSplit&>(split) = assemble_split(a, companion, side, range, null);
  return split;
}

std::size_t nilpotency_index(const RatMatrix& a) {
  if (!a.square()) fail(ErrorKind::shape_mismatch, "A must be square");
  if (a.rows() == 0) return 0;
  RatMatrix p = a;
  for (std::size_t k = 1; k <= a.rows(); ++k) {
    if (p.is_zero()) return k;
    p = p * a;
  }
  fail(ErrorKind::invalid_params, "matrix is not nilpotent");
}

}  // namespace dropctl
