#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dropctl/automaton.hpp"
#include "dropctl/linalg.hpp"
#include "dropctl/verdict.hpp"

namespace dropctl {

/// Stacked rows labels[i] * C * A^i, i = 0..t-1.
RatMatrix observability_matrix(const RatMatrix& a, const RatMatrix& c, const Labels& labels);
/// Block column j (leftmost j = 0) is A^j * B * labels[t-1-j].
RatMatrix reachability_matrix(const RatMatrix& a, const RatMatrix& b, const Labels& labels);

struct ObsMatrix {
  RatMatrix matrix;
  Word word;
};

struct ReachMatrix {
  RatMatrix matrix;
  Word word;
};

ObsMatrix obs_matrix(const RatMatrix& a, const RatMatrix& c, const Word& w);
ReachMatrix reach_matrix(const RatMatrix& a, const RatMatrix& b, const Word& w);

/// prefix followed by `repeats` copies of cycle.
Labels unroll(const Labels& prefix, const Labels& cycle, std::size_t repeats);

/// Tests the periodic signal cyc^w: builds O over n periods (s*n rows) and
/// returns a nonzero kernel vector iff it is rank deficient. Row spans of
/// periodic observability matrices stop growing after n periods, so a
/// deficiency there persists forever.
std::optional<std::vector<Rational>> cycle_unobservable(const RatMatrix& a, const RatMatrix& c,
                                                        const CycleWord& cyc);
/// Same test for the lasso prefix . cycle^w (rows over prefix + n periods).
std::optional<std::vector<Rational>> lasso_unobservable(const RatMatrix& a, const RatMatrix& c,
                                                        const Labels& prefix, const Labels& cycle);

/// Caches C*A^i for growing i.
class RowPowers {
 public:
  RowPowers(RatMatrix a, RatMatrix c);
  const RatMatrix& at(std::size_t i);
  std::size_t state_dim() const noexcept { return a_.rows(); }

 private:
  RatMatrix a_;
  std::vector<RatMatrix> rows_;
};

/// Level-by-level enumeration of admissible label sequences whose
/// observability matrix is still rank deficient. Sequences whose matrix
/// already has full rank are dropped (appending rows keeps the rank full);
/// sequences reaching the same (node set, kernel) pair are merged, keeping
/// the lexicographically smallest representative.
class WordSweeper {
 public:
  WordSweeper(const RatMatrix& a, const RatMatrix& c, const Automaton& automaton);

  /// Extends every surviving sequence by one label.
  void advance();
  std::size_t depth() const noexcept { return depth_; }
  /// True iff every admissible word of length depth() gives full rank.
  bool all_full_rank() const noexcept { return frontier_.empty(); }
  std::size_t frontier_size() const noexcept { return frontier_.size(); }
  /// Lexicographically smallest rank-deficient word of length depth().
  std::optional<Word> counterexample() const;

 private:
  struct State {
    NodeSet nodes;
    Subspace kernel;
    Labels labels;
  };
  const Automaton* automaton_;
  RowPowers powers_;
  std::size_t depth_ = 0;
  std::vector<State> frontier_;
};

struct SweepResult {
  bool all_full_rank = false;
  std::optional<Word> counterexample;
};

SweepResult sweep_words(const RatMatrix& a, const RatMatrix& c, const Automaton& automaton, std::size_t length);

struct DecisionOptions {
  /// 0 selects the default 3 * n * N.
  std::size_t max_depth = 0;
  /// Worker threads for the per-depth cycle tests.
  unsigned jobs = 1;
  /// Set when A, C came from rationalised floats; noted in certificates.
  bool rationalized_input = false;
};

std::size_t default_max_depth(std::size_t state_dim, std::size_t automaton_size);

/// Decides observability of (A, C, automaton). Singular A is settled
/// directly; regular A interleaves the cycle search (routine 1) and the
/// word sweep (routine 2) one length at a time until one concludes or
/// max_depth is hit.
Verdict decide_observability(const RatMatrix& a, const RatMatrix& c, const Automaton& automaton,
                             const DecisionOptions& options = {});

/// Effective period bound for the zero sets of c^T A^t b: with m the lcm of
/// the entry denominators and r the smallest prime not dividing det(mA),
/// P <= r^(n^2).
struct SkolemBound {
  BigInt denominator_lcm;
  BigInt scaled_determinant;
  BigInt prime;
  BigInt period;
  /// period * N, the cycle-length bound for an automaton with N nodes.
  BigInt cycle_length(std::size_t automaton_size) const { return period * static_cast<unsigned long>(automaton_size); }
};

SkolemBound compute_skolem_bound(const RatMatrix& a);

}  // namespace dropctl
