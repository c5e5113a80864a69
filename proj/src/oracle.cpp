#include "dropctl/oracle.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "dropctl/error.hpp"
#include "dropctl/linalg.hpp"

namespace dropctl {

namespace {

struct Powers {
  RatMatrix a;
  std::vector<RatMatrix> a_pow{};

  const RatMatrix& at(std::size_t t) {
    if (a_pow.empty()) a_pow.push_back(RatMatrix::identity(a.rows()));
    while (a_pow.size() <= t) a_pow.push_back(a_pow.back() * a);
    return a_pow[t];
  }
};

void charge(OracleOutcome& out, const OracleBudget& budget) {
  if (++out.checked_count > budget.max_states) fail(ErrorKind::budget_exceeded, "oracle state budget exhausted");
}

Word word_of(const Automaton& aut, const std::vector<NodeId>& path, std::size_t from, std::size_t to) {
  Word w;
  for (std::size_t i = from; i < to; ++i) {
    w.path.push_back(path[i]);
    w.labels.push_back(aut.label(path[i]));
  }
  return w;
}

}  // namespace

OracleOutcome oracle_observability(const RatMatrix& a, const RatMatrix& c, const Automaton& aut, std::size_t depth,
                                   const OracleBudget& budget) {
  const std::size_t n = a.rows();
  OracleOutcome out;
  out.depth = depth;
  if (n == 0) {
    out.kind = OracleOutcome::Kind::holds;
    return out;
  }
  Powers p{a};
  bool unresolved = false;
  bool found = false;
  std::set<std::tuple<std::size_t, NodeId, std::string>> visited;
  std::vector<NodeId> path;
  std::vector<std::string> current;  // key of A^t K_t along the path

  std::function<void(std::size_t, NodeId, const Subspace&)> dfs = [&](std::size_t t, NodeId v, const Subspace& k) {
    if (found) return;
    charge(out, budget);
    if (k.is_zero()) return;
    path.push_back(v);
    // Some consistent initial state has died out: zero output forever.
    if (t > 0 && !k.intersect_kernel(p.at(t)).is_zero()) {
      found = true;
      out.prefix = word_of(aut, path, 0, t);
      path.pop_back();
      return;
    }
    std::string u = k.image_under(p.at(t)).key();
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (path[i] == v && current[i] == u) {
        found = true;
        out.prefix = word_of(aut, path, 0, i);
        out.cycle = word_of(aut, path, i, t);
        path.pop_back();
        return;
      }
    }
    if (t == depth || !visited.emplace(t, v, k.key()).second) {
      unresolved = unresolved || t == depth;
      path.pop_back();
      return;
    }
    current.push_back(u);
    Subspace next = aut.label(v) ? k.intersect_kernel(c * p.at(t)) : k;
    for (NodeId w : aut.successors(v)) dfs(t + 1, w, next);
    current.pop_back();
    path.pop_back();
  };
  for (NodeId v = 0; v < aut.size() && !found; ++v) dfs(0, v, Subspace::full(n));
  out.kind = found ? OracleOutcome::Kind::fails
                   : unresolved ? OracleOutcome::Kind::unresolved : OracleOutcome::Kind::holds;
  return out;
}

OracleOutcome oracle_reachability(const RatMatrix& a, const RatMatrix& b, const Automaton& aut, std::size_t depth,
                                  const OracleBudget& budget) {
  const std::size_t n = a.rows();
  OracleOutcome out;
  out.depth = depth;
  if (n == 0) {
    out.kind = OracleOutcome::Kind::holds;
    return out;
  }
  bool unresolved = false;
  bool found = false;
  std::set<std::tuple<std::size_t, NodeId, std::string>> visited;
  std::vector<NodeId> path;
  std::vector<std::string> images;

  std::function<void(std::size_t, NodeId, const Subspace&)> dfs = [&](std::size_t t, NodeId v, const Subspace& img) {
    if (found) return;
    charge(out, budget);
    if (img.is_full()) return;
    std::string key = img.key();
    path.push_back(v);
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (path[i] == v && images[i] == key) {
        found = true;
        out.prefix = word_of(aut, path, 0, i);
        out.cycle = word_of(aut, path, i, t);
        path.pop_back();
        return;
      }
    }
    if (t == depth || !visited.emplace(t, v, key).second) {
      unresolved = unresolved || t == depth;
      path.pop_back();
      return;
    }
    images.push_back(key);
    Subspace next = img.image_under(a);
    if (aut.label(v)) next = next.sum(b);
    for (NodeId w : aut.successors(v)) dfs(t + 1, w, next);
    images.pop_back();
    path.pop_back();
  };
  for (NodeId v = 0; v < aut.size() && !found; ++v) dfs(0, v, Subspace::zero(n));
  out.kind = found ? OracleOutcome::Kind::fails
                   : unresolved ? OracleOutcome::Kind::unresolved : OracleOutcome::Kind::holds;
  return out;
}

OracleOutcome oracle_delay_controllability(const DelaySystem& sys_in, std::size_t depth, const OracleBudget& budget) {
  DelaySystem sys = sys_in;
  sys.normalize();
  const std::size_t n = sys.a.rows();
  OracleOutcome out;
  out.depth = depth;
  if (n == 0) {
    out.kind = OracleOutcome::Kind::holds;
    return out;
  }
  if (sys.max_delay() >= 60) fail(ErrorKind::invalid_params, "delays too large for the oracle");
  bool unresolved = false;
  bool found = false;
  std::set<std::tuple<std::size_t, std::uint64_t, std::string>> visited;
  DelaySignal signal;
  std::vector<std::pair<std::uint64_t, std::string>> states;

  // pending: bit j set when some packet lands j steps from now.
  std::function<void(std::size_t, std::uint64_t, const Subspace&)> dfs = [&](std::size_t t, std::uint64_t pending,
                                                                            const Subspace& img) {
    if (found) return;
    charge(out, budget);
    if (img.is_full()) {
      if (rank(delay_reach_matrix(sys, signal, t)) != n)
        fail(ErrorKind::internal, "delay image recurrence disagrees with the delayed reachability matrix");
      return;
    }
    std::string key = img.key();
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i].first == pending && states[i].second == key) {
        found = true;
        out.delay_prefix.assign(signal.begin(), signal.begin() + static_cast<std::ptrdiff_t>(i));
        out.delay_cycle.assign(signal.begin() + static_cast<std::ptrdiff_t>(i), signal.end());
        return;
      }
    }
    if (t == depth || !visited.emplace(t, pending, key).second) {
      unresolved = unresolved || t == depth;
      return;
    }
    states.emplace_back(pending, key);
    for (std::size_t d : sys.delays) {
      std::uint64_t p = pending | (std::uint64_t{1} << d);
      Subspace next = img.image_under(sys.a);
      if (p & 1) next = next.sum(sys.b);
      signal.push_back(d);
      dfs(t + 1, p >> 1, next);
      signal.pop_back();
      if (found) break;
    }
    states.pop_back();
  };
  dfs(0, 0, Subspace::zero(n));
  out.kind = found ? OracleOutcome::Kind::fails
                   : unresolved ? OracleOutcome::Kind::unresolved : OracleOutcome::Kind::holds;
  return out;
}

}  // namespace dropctl
