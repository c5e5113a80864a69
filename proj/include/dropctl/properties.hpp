#pragma once

#include "dropctl/automaton.hpp"
#include "dropctl/observability.hpp"
#include "dropctl/spectral.hpp"
#include "dropctl/verdict.hpp"

#include <string>
#include <vector>

namespace dropctl {

struct PropertyOptions {
  DecisionOptions decision;
  /// Eigenvalues within this distance of the unit circle count as unstable.
  double margin = kDefaultSchurMargin;
};

/// Unstable block (A11 with C1 or B1): exact when the unstable eigenvalues
/// form a rational factor, rationalized floats otherwise.
struct UnstableBlock {
  RatMatrix a;
  RatMatrix companion;
  bool exact = true;
  std::vector<std::string> warnings;
};

UnstableBlock unstable_block(const RatMatrix& a, const RatMatrix& companion, Side side, double margin);

/// Observability of the regular part (A_r, C_r); holds trivially for nilpotent A.
Verdict decide_constructibility(const RatMatrix& a, const RatMatrix& c, const Automaton& automaton,
                                const PropertyOptions& options = {});

/// Regular part via the dual on the reverse automaton, nilpotent part via the
/// window check; holds iff both parts hold.
Verdict decide_reachability(const RatMatrix& a, const RatMatrix& b, const Automaton& automaton,
                            const PropertyOptions& options = {});

/// Same status as reachability.
Verdict decide_controllability(const RatMatrix& a, const RatMatrix& b, const Automaton& automaton,
                               const PropertyOptions& options = {});

/// Reachability of the regular part (A_r, B_r).
Verdict decide_zero_controllability(const RatMatrix& a, const RatMatrix& b, const Automaton& automaton,
                                    const PropertyOptions& options = {});

/// Observability of the unstable block (A11, C1).
Verdict decide_detectability(const RatMatrix& a, const RatMatrix& c, const Automaton& automaton,
                             const PropertyOptions& options = {});

/// Reachability of the unstable block (A11, B1).
Verdict decide_stabilizability(const RatMatrix& a, const RatMatrix& b, const Automaton& automaton,
                               const PropertyOptions& options = {});

/// Reachability of a nilpotent pair. With l the nilpotency index, the image
/// of the reachability matrix at time t depends only on the last l labels, so
/// the question becomes whether some infinite path of (node, label window)
/// states avoids every full-rank window. Fails carry that path as a lasso.
Verdict nilpotent_reachable(const RatMatrix& a, const RatMatrix& b, const Automaton& automaton);

/// The coarser test: every admissible word of length l gives a full-rank
/// reachability matrix. Misses signals that escape a deficient start later.
Status nilpotent_reachable_literal(const RatMatrix& a, const RatMatrix& b, const Automaton& automaton);

/// Full-rank flag of every label window over the nilpotent pair (bit j of the
/// index is the label j steps back).
std::vector<bool> full_rank_windows(const RatMatrix& a, const RatMatrix& b, std::size_t index);

}  // namespace dropctl
