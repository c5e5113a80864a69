#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dropctl {

using Label = unsigned char;  // 0 = lost, 1 = delivered
using Labels = std::vector<Label>;
using NodeId = std::size_t;

/// Automaton over the binary loss alphabet: transition relation M and node
/// labels s. Signals are label sequences along infinite paths; any node may
/// start a path.
///
/// Instances are always pruned: every node has an outgoing edge, so every
/// finite path extends to an infinite one. `original_ids()` maps each node
/// back to its index in the matrix the automaton was built from.
class Automaton {
 public:
  /// Prunes (M, s). Throws InvalidParams on malformed input and
  /// EmptyAutomaton when no infinite path exists.
  Automaton(std::vector<std::vector<bool>> transitions, std::vector<Label> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  bool edge(NodeId from, NodeId to) const { return transitions_[from][to]; }
  Label label(NodeId node) const { return labels_[node]; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  const std::vector<std::vector<bool>>& transitions() const noexcept { return transitions_; }
  const std::vector<NodeId>& successors(NodeId node) const { return successors_[node]; }
  const std::vector<NodeId>& original_ids() const noexcept { return original_ids_; }
  /// Number of nodes removed while pruning.
  std::size_t pruned_count() const noexcept { return pruned_count_; }

  /// Relabels `original_ids` through an outer map (used when an automaton
  /// is derived from another pruned automaton).
  void compose_original_ids(const std::vector<NodeId>& outer);

  friend bool operator==(const Automaton& a, const Automaton& b) {
    return a.transitions_ == b.transitions_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<std::vector<bool>> transitions_;
  std::vector<Label> labels_;
  std::vector<std::vector<NodeId>> successors_;
  std::vector<NodeId> original_ids_;
  std::size_t pruned_count_ = 0;
};

/// A finite admissible label sequence with one node path realising it.
struct Word {
  Labels labels;
  std::vector<NodeId> path;

  std::size_t size() const noexcept { return labels.size(); }
};

/// A Word whose path also closes (edge from the last node to the first), so
/// repeating the labels periodically is an admissible signal.
struct CycleWord : Word {};

/// Same as the constructor; kept as a free function for symmetry with the
/// other operations.
Automaton prune(std::vector<std::vector<bool>> transitions, std::vector<Label> labels);

/// Every distinct label sequence of the given length, lexicographic order,
/// one witness path each.
std::vector<Word> enumerate_words(const Automaton& a, std::size_t length);

/// Visits distinct label sequences of the given length in lexicographic
/// order; the visitor returns false to stop early.
void for_each_word(const Automaton& a, std::size_t length, const std::function<bool(const Word&)>& visit);

/// Closed walks of exactly `length` steps, deduplicated by label sequence
/// (rotations are kept, they are different periodic signals). Lexicographic
/// order.
std::vector<CycleWord> enumerate_cycle_words(const Automaton& a, std::size_t length);

/// Reverse automaton (M^T, s), pruned.
Automaton reverse(const Automaton& a);

/// At most `max_losses` consecutive losses: nodes 1..l remember how many
/// losses in a row, node l+1 is the delivered state.
Automaton build_max_dropouts(std::size_t max_losses);

/// Every window of `window` consecutive steps holds at least `required`
/// deliveries. Nodes are the feasible histories of the last window-1 labels.
Automaton build_mk_firmness(std::size_t window, std::size_t required);

/// True iff both automata produce the same label sequences of every length
/// up to `depth`.
bool language_equal_up_to(const Automaton& a, const Automaton& b, std::size_t depth);

/// Is `labels` realised by some path (any start node)? Returns the path.
std::optional<std::vector<NodeId>> find_path(const Automaton& a, const Labels& labels);

/// Checks that `path` is a walk in `a` carrying `labels`.
bool is_walk(const Automaton& a, const std::vector<NodeId>& path, const Labels& labels);
/// is_walk plus the closing edge path.back() -> path.front().
bool is_closed_walk(const Automaton& a, const std::vector<NodeId>& path, const Labels& labels);

/// A closed walk through `node` (shortest, breadth first), rotated to start
/// at `node`; nullopt if `node` lies on no cycle.
std::optional<CycleWord> cycle_through(const Automaton& a, NodeId node);
/// Shortest path from `from` to some node lying on a cycle, then that cycle.
/// Used for lasso certificates. Returns (prefix, cycle).
std::pair<Word, CycleWord> lasso_from(const Automaton& a, NodeId from);

std::string labels_to_string(const Labels& labels);

/// Subset-construction helpers: a set of nodes as a 0/1 vector indexed by node.
using NodeSet = std::vector<char>;
NodeSet nodes_with_label(const Automaton& a, Label label);
/// Successors of `from` carrying `label`.
NodeSet step(const Automaton& a, const NodeSet& from, Label label);
bool any(const NodeSet& s);
/// Recovers one path through the stacked forward sets ending in `last`.
std::vector<NodeId> backtrack(const Automaton& a, const std::vector<NodeSet>& sets, NodeId last);

}  // namespace dropctl
