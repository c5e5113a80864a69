#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dropctl/automaton.hpp"
#include "dropctl/properties.hpp"

namespace dropctl {

/// x(t+1) = A x(t) + sum of B u(t') over the t' whose packet arrives at t,
/// i.e. t' + d(t') = t, with every delay taken from `delays`.
struct DelaySystem {
  RatMatrix a;
  RatMatrix b;
  std::vector<std::size_t> delays;  // sorted, unique, non-empty

  std::size_t max_delay() const { return delays.back(); }
  /// Sorts and dedups `delays`, checks shapes.
  void normalize();
};

using DelaySignal = std::vector<std::size_t>;

/// n x mt matrix; block column i (1-based) is A^(t-i-d(i-1)) B when
/// i + d(i-1) <= t, zero otherwise.
RatMatrix delay_reach_matrix(const DelaySystem& sys, const DelaySignal& d, std::size_t t);

/// tau(t'') = 1 iff some t' <= t'' has t' + d(t') = t'', for t'' < t.
Labels actuation_signal(const DelaySignal& d, std::size_t t);

/// Nodes are the tuples (v_0, ..., v_dmax) over D, v_0 the newest delay,
/// numbered in mixed-radix order with v_0 most significant. The edge into a
/// node applies delay v_0 of that node.
struct DeBruijnAutomaton {
  Automaton automaton;
  std::vector<std::vector<std::size_t>> tuples;
  std::size_t shift = 0;  // d_max

  std::size_t delay_at(NodeId node) const { return tuples[node][0]; }
};

DeBruijnAutomaton de_bruijn_automaton(const std::vector<std::size_t>& delays);

Verdict decide_delay_controllability(const DelaySystem& sys, const PropertyOptions& options = {});

/// Column spaces of the dropout reachability matrix under the actuation
/// signal and of the delay reachability matrix coincide.
bool verify_image_link(const DelaySystem& sys, const DelaySignal& d, std::size_t t);

/// Compares controllability under at most N consecutive dropouts with delay
/// controllability over D = {0..N}. nullopt when either side is inconclusive.
std::optional<bool> verify_maxdrop_delay_equivalence(const RatMatrix& a, const RatMatrix& b, std::size_t max_losses,
                                                     const PropertyOptions& options = {});

}  // namespace dropctl
