#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dropctl/automaton.hpp"
#include "dropctl/delays.hpp"
#include "dropctl/verdict.hpp"

namespace dropctl {

// Brute-force ground truth for small instances. Enumerates raw automaton
// paths (or delay sequences) and evaluates the rank conditions directly.

struct OracleOutcome {
  enum class Kind { holds, fails, unresolved };
  Kind kind = Kind::unresolved;
  /// Fails: the signal prefix . cycle^w (cycle empty when the state dies out
  /// and any continuation works).
  Word prefix;
  Word cycle;
  std::vector<std::size_t> delay_prefix;
  std::vector<std::size_t> delay_cycle;
  std::size_t depth = 0;
  std::size_t checked_count = 0;

  std::optional<Status> status() const {
    if (kind == Kind::holds) return Status::holds;
    if (kind == Kind::fails) return Status::fails;
    return std::nullopt;
  }
};

struct OracleBudget {
  std::size_t max_states = 2'000'000;
};

/// Holds if every path of `depth` nodes reaches a full-rank observability
/// matrix. Fails on a path whose consistent-state set survives forever: the
/// kernel meets ker A^t, or a (node, current-state set) pair repeats.
OracleOutcome oracle_observability(const RatMatrix& a, const RatMatrix& c, const Automaton& automaton,
                                   std::size_t depth, const OracleBudget& budget = {});

/// Same over the reachable-set recurrence I(t+1) = A I(t) + sigma(t) im B.
OracleOutcome oracle_reachability(const RatMatrix& a, const RatMatrix& b, const Automaton& automaton,
                                  std::size_t depth, const OracleBudget& budget = {});

/// Enumerates delay sequences in D^depth; full rank is confirmed on the
/// delayed reachability matrix itself.
OracleOutcome oracle_delay_controllability(const DelaySystem& sys, std::size_t depth,
                                           const OracleBudget& budget = {});

}  // namespace dropctl
