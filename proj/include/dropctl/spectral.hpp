#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

#include "dropctl/linalg.hpp"

namespace dropctl {

constexpr double kDefaultSchurMargin = 1e-9;

/// Eigenvalues with modulus >= 1 (or within `margin` of the unit circle) go to
/// the unstable block.
bool classified_unstable(std::complex<double> eigenvalue, double margin);
/// True for eigenvalues near, but not exactly on, the unit circle.
bool near_unit_circle(std::complex<double> eigenvalue, double margin);

/// Unstable/stable block-diagonalisation W A W^{-1} = diag(A11, A22) computed
/// in floating point (sorted real Schur form followed by a Sylvester solve to
/// remove the coupling block).
struct UnstableStableSplit {
  Eigen::MatrixXd basis;  // W
  Eigen::MatrixXd unstable;
  Eigen::MatrixXd stable;
  Eigen::MatrixXd companion_unstable;  // C1 or B1
  Eigen::MatrixXd companion_stable;
  std::vector<std::complex<double>> eigenvalues;
  std::vector<std::complex<double>> margin_warnings;
  std::size_t unstable_dim = 0;
};

UnstableStableSplit unstable_stable_split(const Eigen::MatrixXd& a, const Eigen::MatrixXd& companion,
                                          Side side, double margin = kDefaultSchurMargin);

/// The same split computed over Q, available when the unstable eigenvalues
/// form a rational factor of the characteristic polynomial (always the case
/// for rational eigenvalues). Returns nullopt when the factor is irrational.
struct ExactUnstableStableSplit {
  InvariantSplit split;  // first = unstable block
  std::vector<std::complex<double>> margin_warnings;
};

std::optional<ExactUnstableStableSplit> exact_unstable_stable_split(const RatMatrix& a,
                                                                    const RatMatrix& companion, Side side,
                                                                    double margin = kDefaultSchurMargin);

std::vector<std::complex<double>> eigenvalues(const RatMatrix& a);

Eigen::MatrixXd to_double(const RatMatrix& m);

/// How float data enters the exact pipeline.
struct Rationalization {
  /// 0 means verbatim: each double becomes its exact binary rational.
  /// Otherwise the simplest rational within `tolerance` is used.
  double tolerance = 0.0;
};

Rational rationalize(double value, const Rationalization& mode = {});
RatMatrix rationalize(const Eigen::MatrixXd& m, const Rationalization& mode = {});

}  // namespace dropctl
