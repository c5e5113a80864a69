#include "dropctl/spectral.hpp"

#include <lapacke.h>

#include <cmath>
#include <limits>

#include "dropctl/error.hpp"
#include "dropctl/polynomial.hpp"

namespace dropctl {

bool classified_unstable(std::complex<double> eigenvalue, double margin) {
  return std::abs(eigenvalue) > 1.0 - margin;
}

bool near_unit_circle(std::complex<double> eigenvalue, double margin) {
  double gap = std::abs(std::abs(eigenvalue) - 1.0);
  return gap > 0.0 && gap < margin;
}

Eigen::MatrixXd to_double(const RatMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c).get_d();
  return out;
}

Rational rationalize(double value, const Rationalization& mode) {
  if (!std::isfinite(value)) fail(ErrorKind::parse, "non-finite matrix entry");
  Rational exact(value);
  if (mode.tolerance <= 0.0) return exact;
  // Continued-fraction convergents until one lands within the tolerance.
  Rational tol(mode.tolerance);
  Rational x = exact;
  BigInt h_prev = 1, h = 0, k_prev = 0, k = 1;
  for (int iter = 0; iter < 128; ++iter) {
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    BigInt h_next = a * h_prev + h;
    BigInt k_next = a * k_prev + k;
    h = h_prev;
    k = k_prev;
    h_prev = h_next;
    k_prev = k_next;
    Rational approx(h_prev, k_prev);
    approx.canonicalize();
    if (abs(approx - exact) <= tol) return approx;
    Rational frac = x - Rational(a);
    if (sgn(frac) == 0) return approx;
    x = 1 / frac;
  }
  return exact;
}

RatMatrix rationalize(const Eigen::MatrixXd& m, const Rationalization& mode) {
  RatMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = rationalize(m(r, c), mode);
  return out;
}

std::vector<std::complex<double>> eigenvalues(const RatMatrix& a) {
  if (a.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> solver(to_double(a), false);
  if (solver.info() != Eigen::Success) fail(ErrorKind::numerical_failure, "eigenvalue iteration did not converge");
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

namespace {

thread_local double select_margin = kDefaultSchurMargin;

lapack_logical select_unstable(const double* re, const double* im) {
  return classified_unstable({*re, *im}, select_margin) ? 1 : 0;
}

}  // namespace

UnstableStableSplit unstable_stable_split(const Eigen::MatrixXd& a, const Eigen::MatrixXd& companion,
                                          Side side, double margin) {
  if (a.rows() != a.cols()) fail(ErrorKind::shape_mismatch, "A must be square");
  if (!(margin > 0.0)) fail(ErrorKind::invalid_params, "Schur margin must be positive");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (side == Side::output && companion.cols() != a.rows()) fail(ErrorKind::shape_mismatch, "C must have n columns");
  if (side == Side::input && companion.rows() != a.rows()) fail(ErrorKind::shape_mismatch, "B must have n rows");

  UnstableStableSplit out;
  if (n == 0) {
    out.basis = Eigen::MatrixXd(0, 0);
    out.unstable = out.stable = Eigen::MatrixXd(0, 0);
    out.companion_unstable = out.companion_stable = companion;
    return out;
  }

  Eigen::MatrixXd t = a;  // column-major, overwritten by the Schur form
  Eigen::MatrixXd q(n, n);
  Eigen::VectorXd wr(n), wi(n);
  lapack_int sdim = 0;
  select_margin = margin;
  lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', select_unstable, n, t.data(), n, &sdim,
                                  wr.data(), wi.data(), q.data(), n);
  if (info != 0) fail(ErrorKind::numerical_failure, "sorted Schur decomposition failed (info=" + std::to_string(info) + ")");

  const lapack_int k = sdim;
  const lapack_int rest = n - k;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(k, rest);
  if (k > 0 && rest > 0) {
    Eigen::MatrixXd t11 = t.topLeftCorner(k, k);
    Eigen::MatrixXd t22 = t.bottomRightCorner(rest, rest);
    x = -t.topRightCorner(k, rest);
    double scale = 1.0;
    // T11 X - X T22 = -T12
    info = LAPACKE_dtrsyl(LAPACK_COL_MAJOR, 'N', 'N', -1, k, rest, t11.data(), k, t22.data(), rest, x.data(), k, &scale);
    if (info < 0 || scale == 0.0) fail(ErrorKind::numerical_failure, "Sylvester solve for the decoupling block failed");
    x /= scale;
  }
  Eigen::MatrixXd y = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd y_inv = Eigen::MatrixXd::Identity(n, n);
  y.topRightCorner(k, rest) = x;
  y_inv.topRightCorner(k, rest) = -x;
  Eigen::MatrixXd v = q * y;                   // W^{-1}
  out.basis = y_inv * q.transpose();           // W
  Eigen::MatrixXd d = out.basis * a * v;
  out.unstable = d.topLeftCorner(k, k);
  out.stable = d.bottomRightCorner(rest, rest);
  out.unstable_dim = static_cast<std::size_t>(k);
  if (side == Side::output) {
    Eigen::MatrixXd cv = companion * v;
    out.companion_unstable = cv.leftCols(k);
    out.companion_stable = cv.rightCols(rest);
  } else {
    Eigen::MatrixXd wb = out.basis * companion;
    out.companion_unstable = wb.topRows(k);
    out.companion_stable = wb.bottomRows(rest);
  }
  for (lapack_int i = 0; i < n; ++i) {
    std::complex<double> lambda(wr(i), wi(i));
    out.eigenvalues.push_back(lambda);
    if (near_unit_circle(lambda, margin)) out.margin_warnings.push_back(lambda);
  }
  return out;
}

std::optional<ExactUnstableStableSplit> exact_unstable_stable_split(const RatMatrix& a,
                                                                    const RatMatrix& companion, Side side,
                                                                    double margin) {
  if (!a.square()) fail(ErrorKind::shape_mismatch, "A must be square");
  if (!(margin > 0.0)) fail(ErrorKind::invalid_params, "Schur margin must be positive");
  const std::size_t n = a.rows();
  ExactUnstableStableSplit out;
  auto lambdas = eigenvalues(a);
  std::vector<std::complex<double>> unstable;
  for (const auto& l : lambdas) {
    if (classified_unstable(l, margin)) unstable.push_back(l);
    if (near_unit_circle(l, margin)) out.margin_warnings.push_back(l);
  }
  if (unstable.empty() || unstable.size() == n) {
    RatMatrix all = RatMatrix::identity(n);
    RatMatrix none(n, 0);
    out.split = unstable.empty() ? assemble_split(a, companion, side, none, all)
                                 : assemble_split(a, companion, side, all, none);
    return out;
  }

  // Eigenvalues of the integer matrix m*A are m*lambda; its characteristic
  // polynomial is monic over Z, so a rational factor has integer coefficients.
  BigInt scale = lcm_of_denominators(a);
  RatMatrix scaled = a * Rational(scale);
  Polynomial chi = characteristic_polynomial(scaled);
  const double s = scale.get_d();
  std::vector<std::complex<double>> coeffs{1.0};
  for (const auto& l : unstable) {
    std::vector<std::complex<double>> next(coeffs.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] += coeffs[i];
      next[i] -= coeffs[i] * (l * s);
    }
    coeffs = std::move(next);
  }
  std::vector<Rational> rounded;
  for (const auto& c : coeffs) {
    double tol = 1e-6 * std::max(1.0, std::abs(c));
    if (std::abs(c.imag()) > tol) return std::nullopt;
    double r = std::round(c.real());
    if (std::abs(r - c.real()) > tol || std::abs(r) > 9.0e15) return std::nullopt;
    rounded.emplace_back(static_cast<long>(r));
  }
  Polynomial p(rounded);
  DivMod dm = divmod(chi, p);
  if (!dm.remainder.is_zero()) return std::nullopt;
  Polynomial q = dm.quotient;
  // Numerically split copies of a repeated root move to the unstable side.
  for (;;) {
    Polynomial g = gcd(p, q);
    if (g.degree() <= 0) break;
    p = p * g;
    q = divmod(q, g).quotient;
  }
  RatMatrix unstable_basis = kernel_matrix(evaluate(p, scaled));
  RatMatrix stable_basis = kernel_matrix(evaluate(q, scaled));
  if (unstable_basis.cols() != static_cast<std::size_t>(p.degree()) ||
      stable_basis.cols() != static_cast<std::size_t>(q.degree()))
    fail(ErrorKind::internal, "primary decomposition dimension mismatch");
  out.split = assemble_split(a, companion, side, unstable_basis, stable_basis);
  return out;
}

}  // namespace dropctl
