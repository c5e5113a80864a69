#pragma once

#include <vector>

#include "dropctl/matrix.hpp"

namespace dropctl {

/// Polynomial over Q, coefficients stored lowest degree first and trimmed so
/// the leading coefficient is nonzero (the zero polynomial has no coefficients).
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);

  static Polynomial constant(const Rational& c) { return Polynomial({c}); }
  /// x - root
  static Polynomial linear(const Rational& root) { return Polynomial({-root, 1}); }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }
  const Rational& leading() const { return coeffs_.back(); }

  Polynomial monic() const;

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

struct DivMod {
  Polynomial quotient;
  Polynomial remainder;
};

DivMod divmod(const Polynomial& num, const Polynomial& den);
/// Monic greatest common divisor (zero if both are zero).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// det(xI - A), via Faddeev-LeVerrier over Q.
Polynomial characteristic_polynomial(const RatMatrix& a);

/// p(A) by Horner's rule.
RatMatrix evaluate(const Polynomial& p, const RatMatrix& a);

}  // namespace dropctl
