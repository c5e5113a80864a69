#include "dropctl/polynomial.hpp"

#include <utility>

#include "dropctl/error.hpp"

namespace dropctl {

Polynomial::Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  Polynomial p = *this;
  Rational lead = leading();
  for (auto& c : p.coeffs_) c /= lead;
  return p;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(out));
}

DivMod divmod(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) fail(ErrorKind::invalid_params, "polynomial division by zero");
  std::vector<Rational> rem = num.coefficients();
  const auto& d = den.coefficients();
  if (num.degree() < den.degree()) return {Polynomial{}, num};
  std::vector<Rational> quot(rem.size() - d.size() + 1);
  for (std::size_t k = quot.size(); k-- > 0;) {
    Rational q = rem[k + d.size() - 1] / d.back();
    quot[k] = q;
    if (sgn(q) == 0) continue;
    for (std::size_t j = 0; j < d.size(); ++j) rem[k + j] -= q * d[j];
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  Polynomial x = a;
  Polynomial y = b;
  while (!y.is_zero()) {
    Polynomial r = divmod(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Polynomial characteristic_polynomial(const RatMatrix& a) {
  if (!a.square()) fail(ErrorKind::shape_mismatch, "characteristic polynomial of a non-square matrix");
  const std::size_t n = a.rows();
  // M_0 = 0, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  RatMatrix m = RatMatrix::zero(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    RatMatrix am = a * m;
    Rational trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
    c[n - k] = -trace / static_cast<long>(k);
  }
  return Polynomial(std::move(c));
}

RatMatrix evaluate(const Polynomial& p, const RatMatrix& a) {
  const std::size_t n = a.rows();
  RatMatrix result = RatMatrix::zero(n, n);
  const auto& c = p.coefficients();
  for (std::size_t k = c.size(); k-- > 0;) {
    result = result * a;
    for (std::size_t i = 0; i < n; ++i) result(i, i) += c[k];
  }
  return result;
}

}  // namespace dropctl
