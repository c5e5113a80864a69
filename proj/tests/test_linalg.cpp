#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "dropctl/error.hpp"
#include "dropctl/linalg.hpp"
#include "dropctl/observability.hpp"
#include "dropctl/polynomial.hpp"
#include "dropctl/spectral.hpp"
#include "test_support.hpp"

using namespace dropctl;
using namespace dropctl::testing;

TEST(Rational, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-7/2"), Rational(-7, 2));
  EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(to_string(Rational(-6, 4)), "-3/2");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Rank, ClassicalObservabilityMatrices) {
  RatMatrix o = observability_matrix(cube27_a(), cube27_c(), {1, 1, 1});
  EXPECT_EQ(rank(o), 3u);
  EXPECT_EQ(rank(RatMatrix::zero(3, 4)), 0u);
  EXPECT_EQ(rank(observability_matrix(swap_a(), swap_c(), {1, 1})), 2u);
}

TEST(Rank, ExactWhereFloatsStruggle) {
  // Rows differ by 1e-30: independent over Q.
  Rational eps = Rational(1) / Rational(BigInt("1000000000000000000000000000000"));
  RatMatrix m{{1, 1}, {1, Rational(1) + eps}};
  EXPECT_EQ(rank(m), 2u);
}

TEST(Kernel, Basics) {
  EXPECT_TRUE(kernel_basis(RatMatrix::identity(3)).empty());
  // Output sampled only at t = 0: rows (C; 0) = ((0,1),(0,0)).
  auto k = kernel_basis(observability_matrix(swap_a(), swap_c(), {1, 0}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_NE(k[0][0], 0);
  EXPECT_EQ(k[0][1], 0);
  EXPECT_EQ(kernel_basis(RatMatrix{{0, 0}}).size(), 2u);
}

TEST(Linalg, PowerStackAndProducts) {
  EXPECT_EQ(power(cube27_a(), 0), RatMatrix::identity(3));
  RatMatrix sq = power(cube27_a(), 2);
  // Independent re-multiplication of entry (0,0) with plain integers.
  long a[3][3] = {{-2, -13, 9}, {-5, -10, 9}, {-10, -11, 12}};
  long e00 = 0;
  for (int k = 0; k < 3; ++k) e00 += a[0][k] * a[k][0];
  EXPECT_EQ(sq(0, 0), Rational(e00));
  EXPECT_EQ(vstack(swap_c(), swap_c() * swap_a()), (RatMatrix{{0, 1}, {1, 0}}));
  EXPECT_EQ(observability_matrix(cube27_a(), cube27_c(), {1, 1, 1}),
            (RatMatrix{{1, 2, 3}, {-42, -66, 63}, {-216, 513, -216}}));
}

TEST(Linalg, ShapeErrors) {
  EXPECT_THROW(RatMatrix::identity(2) * RatMatrix::identity(3), Error);
  EXPECT_THROW(hstack(RatMatrix::identity(2), RatMatrix::identity(3)), Error);
}

TEST(Subspace, CanonicalKeys) {
  Subspace a = Subspace::span_columns(RatMatrix{{1, 2}, {0, 0}, {1, 2}});
  Subspace b = Subspace::span_columns(RatMatrix{{3}, {0}, {3}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.key(), b.key());
  EXPECT_EQ(a.dim(), 1u);
  EXPECT_TRUE(Subspace::full(3).intersect_kernel(RatMatrix::identity(3)).is_zero());
  EXPECT_EQ(Subspace::zero(2).sum(RatMatrix::identity(2)), Subspace::full(2));
}

TEST(RegularNilpotentSplit, Examples) {
  auto inv = regular_nilpotent_split(swap_a(), RatMatrix{{1}, {0}}, Side::input);
  EXPECT_EQ(inv.regular_dim(), 2u);
  EXPECT_EQ(inv.second.rows(), 0u);

  auto zero = regular_nilpotent_split(RatMatrix::zero(2, 2), RatMatrix{{1, 0}}, Side::output);
  EXPECT_EQ(zero.regular_dim(), 0u);
  EXPECT_TRUE(zero.second.is_zero());

  RatMatrix jordan{{0, 1}, {0, 0}};
  auto nil = regular_nilpotent_split(jordan, RatMatrix{{1}, {0}}, Side::input);
  EXPECT_EQ(nil.regular_dim(), 0u);
  EXPECT_EQ(nilpotency_index(nil.second), 2u);
  EXPECT_EQ(rank(nil.companion_second), 1u);
}

TEST(RegularNilpotentSplit, RoundTripOnRandomMatrices) {
  Random rnd(11);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = static_cast<std::size_t>(rnd.integer(1, 4));
    RatMatrix a = rnd.matrix(n, n, 4, 0.45);
    RatMatrix c = rnd.matrix(1, n);
    auto split = regular_nilpotent_split(a, c, Side::output);
    RatMatrix blocks = block_diag(split.first, split.second);
    EXPECT_EQ(split.basis_inverse * blocks * split.basis, a);
    EXPECT_EQ(hstack(split.companion_first, split.companion_second), c * split.basis_inverse);
    EXPECT_EQ(rank(split.first), split.regular_dim());
    std::size_t s = n - split.regular_dim();
    if (s > 0) EXPECT_TRUE(power(split.second, s).is_zero());
  }
}

TEST(Rank, TransposeInvariantAndMatchesFloatRank) {
  Random rnd(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t r = static_cast<std::size_t>(rnd.integer(1, 5));
    std::size_t c = static_cast<std::size_t>(rnd.integer(1, 5));
    RatMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (rnd.coin(0.6)) m(i, j) = rnd.integer(-4, 4);
    EXPECT_EQ(rank(m), rank(m.transpose()));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_double(m));
    svd.setThreshold(1e-8);
    EXPECT_EQ(rank(m), static_cast<std::size_t>(svd.rank()));
    for (const auto& v : kernel_basis(m)) EXPECT_TRUE(is_zero_vector(m * v));
  }
}

TEST(Polynomial, CharacteristicPolynomialAndCayleyHamilton) {
  Random rnd(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = static_cast<std::size_t>(rnd.integer(1, 4));
    RatMatrix a = rnd.matrix(n, n);
    Polynomial p = characteristic_polynomial(a);
    EXPECT_EQ(p.degree(), static_cast<int>(n));
    EXPECT_TRUE(evaluate(p, a).is_zero());
  }
}

TEST(UnstableStableSplit, CleanSeparation) {
  Eigen::MatrixXd a(2, 2);
  a << 2, 0, 0, 0.5;
  Eigen::MatrixXd c(1, 2);
  c << 1, 1;
  auto s = unstable_stable_split(a, c, Side::output);
  ASSERT_EQ(s.unstable_dim, 1u);
  EXPECT_NEAR(s.unstable(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(s.stable(0, 0), 0.5, 1e-12);
  EXPECT_TRUE(s.margin_warnings.empty());
}

TEST(UnstableStableSplit, AllStableAndBoundary) {
  Eigen::MatrixXd stable(2, 2);
  stable << 0.5, 0.1, 0, -0.3;
  Eigen::MatrixXd c(1, 2);
  c << 1, 0;
  EXPECT_EQ(unstable_stable_split(stable, c, Side::output).unstable_dim, 0u);

  Eigen::MatrixXd boundary(2, 2);
  boundary << 1, 0, 0, 0.5;
  auto s = unstable_stable_split(boundary, c, Side::output);
  ASSERT_EQ(s.unstable_dim, 1u);
  EXPECT_NEAR(s.unstable(0, 0), 1.0, 1e-12);
  EXPECT_TRUE(s.margin_warnings.empty());
}

TEST(UnstableStableSplit, NearCircleIsWarned) {
  Eigen::MatrixXd a(2, 2);
  a << 1 - 1e-12, 0, 0, 0.5;
  Eigen::MatrixXd c(1, 2);
  c << 1, 1;
  auto s = unstable_stable_split(a, c, Side::output, 1e-9);
  EXPECT_EQ(s.unstable_dim, 1u);
  EXPECT_EQ(s.margin_warnings.size(), 1u);
}

TEST(UnstableStableSplit, RandomInvariants) {
  Random rnd(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = static_cast<std::size_t>(rnd.integer(1, 4));
    RatMatrix a = rnd.matrix(n, n, 3, 0.2);
    RatMatrix b = rnd.matrix(n, 1);
    auto s = unstable_stable_split(to_double(a), to_double(b), Side::input);
    Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const auto k = static_cast<Eigen::Index>(s.unstable_dim);
    const auto rest = static_cast<Eigen::Index>(n) - k;
    blocks.topLeftCorner(k, k) = s.unstable;
    blocks.bottomRightCorner(rest, rest) = s.stable;
    EXPECT_LT((s.basis * to_double(a) * s.basis.inverse() - blocks).norm(), 1e-8);
    if (rest > 0) {
      Eigen::EigenSolver<Eigen::MatrixXd> stable(s.stable);
      for (auto z : stable.eigenvalues()) EXPECT_LT(std::abs(z), 1.0);
    }
    if (k > 0) {
      Eigen::EigenSolver<Eigen::MatrixXd> unstable(s.unstable);
      for (auto z : unstable.eigenvalues()) EXPECT_GE(std::abs(z), 1.0 - kDefaultSchurMargin);
    }
  }
}

TEST(ExactUnstableStableSplit, RationalEigenvalues) {
  RatMatrix a{{2, 1}, {0, Rational(1, 2)}};
  RatMatrix c{{1, 0}};
  auto s = exact_unstable_stable_split(a, c, Side::output);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->split.dim1, 1u);
  EXPECT_EQ(s->split.first, (RatMatrix{{2}}));
  EXPECT_EQ(s->split.second, (RatMatrix{{Rational(1, 2)}}));
}

TEST(Rationalize, VerbatimAndTolerance) {
  EXPECT_EQ(rationalize(0.5), Rational(1, 2));
  EXPECT_NE(rationalize(0.1), Rational(1, 10));
  EXPECT_EQ(rationalize(0.1, Rationalization{1e-9}), Rational(1, 10));
  EXPECT_EQ(rationalize(1.0 / 3.0, Rationalization{1e-9}), Rational(1, 3));
}
