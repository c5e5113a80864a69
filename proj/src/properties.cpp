#include "dropctl/properties.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "dropctl/error.hpp"

namespace dropctl {

namespace {

void check_pair(const RatMatrix& a, const RatMatrix& companion, Side side) {
  if (!a.square()) fail(ErrorKind::shape_mismatch, "A must be square");
  if (side == Side::output && companion.cols() != a.rows())
    fail(ErrorKind::shape_mismatch, "C must have as many columns as A");
  if (side == Side::input && companion.rows() != a.rows())
    fail(ErrorKind::shape_mismatch, "B must have as many rows as A");
}

Verdict trivial(std::string property, std::string reason) {
  Verdict v;
  v.property = std::move(property);
  v.status = Status::holds;
  v.certificate = TrivialCert{std::move(reason)};
  return v;
}

void prepend_trace(Verdict& v, std::vector<std::string> steps) {
  steps.insert(steps.end(), v.reduction_trace.begin(), v.reduction_trace.end());
  v.reduction_trace = std::move(steps);
}

// Reachability of a regular pair through its dual.
Verdict regular_reachability(const RatMatrix& a, const RatMatrix& b, const Automaton& aut,
                             const PropertyOptions& options) {
  Automaton rev = reverse(aut);
  Verdict v = decide_observability(a.transpose(), b.transpose(), rev, options.decision);
  v.subject->reversed_automaton = true;
  prepend_trace(v, {"dual-reverse-automaton"});
  return v;
}

Status combine(Status x, Status y) {
  if (x == Status::fails || y == Status::fails) return Status::fails;
  if (x == Status::holds && y == Status::holds) return Status::holds;
  return Status::inconclusive;
}

std::string format_eigenvalue(std::complex<double> z) {
  std::ostringstream out;
  out.precision(12);
  out << z.real();
  if (z.imag() != 0.0) out << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return out.str();
}

}  // namespace

UnstableBlock unstable_block(const RatMatrix& a, const RatMatrix& companion, Side side, double margin) {
  if (!(margin > 0)) fail(ErrorKind::invalid_params, "margin must be positive");
  UnstableBlock part;
  std::vector<std::complex<double>> near;
  if (auto exact = exact_unstable_stable_split(a, companion, side, margin)) {
    part.a = exact->split.first;
    part.companion = exact->split.companion_first;
    near = exact->margin_warnings;
  } else {
    UnstableStableSplit split = unstable_stable_split(to_double(a), to_double(companion), side, margin);
    part.a = rationalize(split.unstable);
    part.companion = rationalize(split.companion_unstable);
    part.exact = false;
    near = split.margin_warnings;
    part.warnings.push_back("unstable block computed in floating point and rationalized");
  }
  for (auto z : near)
    part.warnings.push_back("eigenvalue " + format_eigenvalue(z) + " lies within the margin of the unit circle; classified unstable");
  return part;
}

Verdict decide_constructibility(const RatMatrix& a, const RatMatrix& c, const Automaton& aut,
                                const PropertyOptions& options) {
  check_pair(a, c, Side::output);
  RegularNilpotentSplit split = regular_nilpotent_split(a, c, Side::output);
  Verdict v;
  if (split.regular_dim() == 0) {
    v = trivial("constructibility", "A is nilpotent: every state reaches 0");
  } else {
    v = decide_observability(split.first, split.companion_first, aut, options.decision);
  }
  v.property = "constructibility";
  prepend_trace(v, {"regular-nilpotent-split"});
  return v;
}

Verdict decide_reachability(const RatMatrix& a, const RatMatrix& b, const Automaton& aut,
                            const PropertyOptions& options) {
  check_pair(a, b, Side::input);
  RegularNilpotentSplit split = regular_nilpotent_split(a, b, Side::input);
  const bool has_regular = split.regular_dim() > 0;
  const bool has_nilpotent = split.second.rows() > 0;

  Verdict v;
  if (!has_regular && !has_nilpotent) {
    v = trivial("reachability", "zero-dimensional state space");
  } else if (!has_nilpotent) {
    v = regular_reachability(split.first, split.companion_first, aut, options);
  } else if (!has_regular) {
    v = nilpotent_reachable(split.second, split.companion_second, aut);
  } else {
    Verdict regular = regular_reachability(split.first, split.companion_first, aut, options);
    regular.property = "reachability (regular part)";
    Verdict nilpotent = nilpotent_reachable(split.second, split.companion_second, aut);
    nilpotent.property = "reachability (nilpotent part)";
    v.status = combine(regular.status, nilpotent.status);
    v.exact = regular.exact && nilpotent.exact;
    v.certificate = CompositeCert{{std::move(regular), std::move(nilpotent)}};
  }
  v.property = "reachability";
  prepend_trace(v, {"regular-nilpotent-split"});
  return v;
}

Verdict decide_controllability(const RatMatrix& a, const RatMatrix& b, const Automaton& aut,
                               const PropertyOptions& options) {
  Verdict v = decide_reachability(a, b, aut, options);
  v.property = "controllability";
  prepend_trace(v, {"controllability-equals-reachability"});
  return v;
}

Verdict decide_zero_controllability(const RatMatrix& a, const RatMatrix& b, const Automaton& aut,
                                    const PropertyOptions& options) {
  check_pair(a, b, Side::input);
  RegularNilpotentSplit split = regular_nilpotent_split(a, b, Side::input);
  Verdict v;
  if (split.regular_dim() == 0) {
    v = trivial("zero-controllability", "A is nilpotent: every state reaches 0 without input");
  } else {
    v = regular_reachability(split.first, split.companion_first, aut, options);
    prepend_trace(v, {"regular-part-reachability"});
  }
  v.property = "zero-controllability";
  prepend_trace(v, {"regular-nilpotent-split"});
  return v;
}

Verdict decide_detectability(const RatMatrix& a, const RatMatrix& c, const Automaton& aut,
                             const PropertyOptions& options) {
  check_pair(a, c, Side::output);
  UnstableBlock part = unstable_block(a, c, Side::output, options.margin);
  Verdict v;
  if (part.a.rows() == 0) {
    v = trivial("detectability", "every eigenvalue lies inside the unit disk");
  } else {
    DecisionOptions d = options.decision;
    d.rationalized_input = d.rationalized_input || !part.exact;
    v = decide_observability(part.a, part.companion, aut, d);
  }
  v.property = "detectability";
  v.exact = part.exact;
  v.warnings.insert(v.warnings.end(), part.warnings.begin(), part.warnings.end());
  prepend_trace(v, {"unstable-stable-split"});
  return v;
}

Verdict decide_stabilizability(const RatMatrix& a, const RatMatrix& b, const Automaton& aut,
                               const PropertyOptions& options) {
  check_pair(a, b, Side::input);
  UnstableBlock part = unstable_block(a, b, Side::input, options.margin);
  Verdict v;
  if (part.a.rows() == 0) {
    v = trivial("stabilizability", "every eigenvalue lies inside the unit disk");
  } else {
    PropertyOptions o = options;
    o.decision.rationalized_input = o.decision.rationalized_input || !part.exact;
    v = decide_reachability(part.a, part.companion, aut, o);
  }
  v.property = "stabilizability";
  v.exact = part.exact;
  v.warnings.insert(v.warnings.end(), part.warnings.begin(), part.warnings.end());
  prepend_trace(v, {"unstable-stable-split"});
  return v;
}

// ---------------------------------------------------------------------------

std::vector<bool> full_rank_windows(const RatMatrix& a, const RatMatrix& b, std::size_t index) {
  const std::size_t n = a.rows();
  std::vector<RatMatrix> powers;
  RatMatrix col = b;
  for (std::size_t j = 0; j < index; ++j) {
    powers.push_back(col);
    col = a * col;
  }
  std::vector<bool> full(std::size_t{1} << index, false);
  for (std::size_t mask = 0; mask < full.size(); ++mask) {
    std::vector<RatMatrix> blocks;
    for (std::size_t j = 0; j < index; ++j)
      if (mask >> j & 1) blocks.push_back(powers[j]);
    full[mask] = !blocks.empty() && rank(hstack(blocks, n)) == n;
  }
  return full;
}

Verdict nilpotent_reachable(const RatMatrix& a, const RatMatrix& b, const Automaton& aut) {
  check_pair(a, b, Side::input);
  Verdict v;
  v.property = "reachability";
  v.subject = Subject{Subject::Kind::nilpotent_reachability, a, b, false};
  if (a.rows() == 0) {
    v.status = Status::holds;
    v.certificate = TrivialCert{"zero-dimensional state space"};
    return v;
  }
  const std::size_t ell = nilpotency_index(a);
  if (ell > 20) fail(ErrorKind::budget_exceeded, "nilpotency index too large for the window check");
  const std::vector<bool> full = full_rank_windows(a, b, ell);
  const std::size_t windows = full.size();
  const std::size_t wmask = windows - 1;
  auto id = [&](NodeId node, std::size_t mask) { return node * windows + mask; };
  const std::size_t total = aut.size() * windows;

  // Unmarked states reachable from the start states through unmarked states.
  std::vector<char> in(total, 0);
  std::vector<std::size_t> parent(total, total);
  std::vector<std::size_t> queue;
  for (NodeId u = 0; u < aut.size(); ++u) {
    std::size_t mask = aut.label(u);
    if (full[mask]) continue;
    in[id(u, mask)] = 1;
    queue.push_back(id(u, mask));
  }
  auto successors = [&](std::size_t s, const std::function<void(std::size_t)>& visit) {
    NodeId node = s / windows;
    std::size_t mask = s % windows;
    for (NodeId w : aut.successors(node)) visit(id(w, ((mask << 1) | aut.label(w)) & wmask));
  };
  for (std::size_t head = 0; head < queue.size(); ++head) {
    successors(queue[head], [&](std::size_t t) {
      if (in[t] || full[t % windows]) return;
      in[t] = 1;
      parent[t] = queue[head];
      queue.push_back(t);
    });
  }

  // Prune to the states with an infinite unmarked future.
  std::vector<char> alive = in;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s : queue) {
      if (!alive[s]) continue;
      bool has = false;
      successors(s, [&](std::size_t t) { has = has || alive[t]; });
      if (!has) {
        alive[s] = 0;
        changed = true;
      }
    }
  }

  auto survivor = std::find_if(queue.begin(), queue.end(), [&](std::size_t s) { return alive[s] != 0; });
  if (survivor != queue.end()) {
    std::vector<std::size_t> walk;
    for (std::size_t s = *survivor; s != total; s = parent[s]) walk.push_back(s);
    std::reverse(walk.begin(), walk.end());
    std::map<std::size_t, std::size_t> seen;
    for (std::size_t i = 0; i < walk.size(); ++i) seen.emplace(walk[i], i);
    std::size_t cur = walk.back();
    std::size_t loop_start = 0;
    for (;;) {
      std::size_t next = total;
      successors(cur, [&](std::size_t t) {
        if (next == total && alive[t]) next = t;
      });
      if (auto it = seen.find(next); it != seen.end()) {
        loop_start = it->second;
        break;
      }
      seen.emplace(next, walk.size());
      walk.push_back(next);
      cur = next;
    }
    LassoCert cert;
    for (std::size_t i = 0; i < walk.size(); ++i) {
      NodeId node = walk[i] / windows;
      Word& part = i < loop_start ? cert.prefix : cert.cycle;
      part.labels.push_back(aut.label(node));
      part.path.push_back(node);
    }
    v.status = Status::fails;
    v.certificate = std::move(cert);
    return v;
  }

  // The unmarked region is acyclic: bound its longest run.
  std::vector<std::size_t> longest(total, 0);
  std::function<std::size_t(std::size_t)> depth = [&](std::size_t s) -> std::size_t {
    if (longest[s]) return longest[s];
    std::size_t best = 0;
    successors(s, [&](std::size_t t) {
      if (in[t]) best = std::max(best, depth(t));
    });
    return longest[s] = best + 1;
  };
  std::size_t run = 0;
  for (NodeId u = 0; u < aut.size(); ++u) {
    std::size_t s = id(u, aut.label(u));
    if (in[s]) run = std::max(run, depth(s));
  }
  v.status = Status::holds;
  v.certificate = HorizonCert{run + 1};
  return v;
}

Status nilpotent_reachable_literal(const RatMatrix& a, const RatMatrix& b, const Automaton& aut) {
  check_pair(a, b, Side::input);
  if (a.rows() == 0) return Status::holds;
  const std::size_t ell = nilpotency_index(a);
  bool all_full = true;
  for_each_word(aut, ell, [&](const Word& w) {
    all_full = rank(reachability_matrix(a, b, w.labels)) == a.rows();
    return all_full;
  });
  return all_full ? Status::holds : Status::fails;
}

}  // namespace dropctl
