#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dropctl/matrix.hpp"

namespace dropctl {

/// Exact rank by fraction-free (Bareiss) elimination. Rows are first scaled
/// to integers, which leaves the rank unchanged.
std::size_t rank(const RatMatrix& m);

/// Determinant via Bareiss on the integer-scaled matrix.
Rational determinant(const RatMatrix& m);

/// Reduced row echelon form. `pivots` receives the pivot column of each
/// nonzero row.
RatMatrix rref(const RatMatrix& m, std::vector<std::size_t>* pivots = nullptr);

/// Basis of the right null space, one vector per free column. Empty iff
/// rank(m) == m.cols().
std::vector<std::vector<Rational>> kernel_basis(const RatMatrix& m);
/// Same basis packed as the columns of a cols x k matrix.
RatMatrix kernel_matrix(const RatMatrix& m);
/// Basis of the column space: the pivot columns of m.
RatMatrix image_matrix(const RatMatrix& m);

std::optional<RatMatrix> inverse(const RatMatrix& m);

/// Subspace of Q^n in canonical form: the nonzero rows of the RREF of a
/// spanning set, stored as rows. Two subspaces are equal iff their basis
/// matrices are equal, so the basis doubles as a hash key.
class Subspace {
 public:
  static Subspace full(std::size_t n);
  static Subspace zero(std::size_t n);
  /// Span of the columns of `generators` (n x k).
  static Subspace span_columns(const RatMatrix& generators);
  /// {x : rows * x = 0}.
  static Subspace kernel_of(const RatMatrix& rows);

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.rows(); }
  bool is_zero() const noexcept { return dim() == 0; }
  bool is_full() const noexcept { return dim() == ambient_; }

  /// Basis vectors as columns (ambient x dim).
  RatMatrix columns() const { return basis_.transpose(); }
  const RatMatrix& rows() const noexcept { return basis_; }

  /// this ∩ {x : constraint * x = 0}.
  Subspace intersect_kernel(const RatMatrix& constraint) const;
  /// {m * x : x in this}.
  Subspace image_under(const RatMatrix& m) const;
  /// this + span(columns of generators).
  Subspace sum(const RatMatrix& generators) const;

  std::string key() const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}
  static Subspace from_rows(std::size_t ambient, const RatMatrix& spanning_rows);

  std::size_t ambient_ = 0;
  RatMatrix basis_;
};

/// Which companion matrix travels with A through a change of basis.
enum class Side { output, input };

/// A block-diagonalisation T^{-1} A T = diag(A1, A2) along two complementary
/// A-invariant subspaces, with the companion transformed alongside
/// (C T = [C1 C2] for outputs, T^{-1} B = [B1; B2] for inputs).
/// `basis` is T^{-1}, i.e. basis * A * basis^{-1} is block diagonal.
struct InvariantSplit {
  RatMatrix basis;
  RatMatrix basis_inverse;
  RatMatrix first;      // A1 (dim1 x dim1)
  RatMatrix second;     // A2
  RatMatrix companion_first;
  RatMatrix companion_second;
  std::size_t dim1 = 0;
};

/// Assembles the split from bases of two complementary invariant subspaces
/// (columns of `first_basis`, `second_basis`).
InvariantSplit assemble_split(const RatMatrix& a, const RatMatrix& companion, Side side,
                              const RatMatrix& first_basis, const RatMatrix& second_basis);

/// Regular/nilpotent decomposition: first = A_r (invertible) on image(A^n),
/// second = A_s (nilpotent) on kernel(A^n).
struct RegularNilpotentSplit : InvariantSplit {
  std::size_t regular_dim() const { return dim1; }
};

RegularNilpotentSplit regular_nilpotent_split(const RatMatrix& a, const RatMatrix& companion,
                                              Side side);

/// Smallest k >= 1 with a^k = 0; 0 for the empty matrix. Throws InvalidParams
/// if a is not nilpotent.
std::size_t nilpotency_index(const RatMatrix& a);

BigInt lcm_of_denominators(const RatMatrix& m);

}  // namespace dropctl
