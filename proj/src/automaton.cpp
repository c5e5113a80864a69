#include "dropctl/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <utility>

#include "dropctl/error.hpp"

namespace dropctl {

bool any(const NodeSet& s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c != 0; });
}

NodeSet step(const Automaton& a, const NodeSet& from, Label label) {
  NodeSet next(a.size(), 0);
  for (NodeId v = 0; v < a.size(); ++v) {
    if (!from[v]) continue;
    for (NodeId w : a.successors(v))
      if (a.label(w) == label) next[w] = 1;
  }
  return next;
}

NodeSet nodes_with_label(const Automaton& a, Label label) {
  NodeSet s(a.size(), 0);
  for (NodeId v = 0; v < a.size(); ++v) s[v] = a.label(v) == label ? 1 : 0;
  return s;
}

std::vector<NodeId> backtrack(const Automaton& a, const std::vector<NodeSet>& sets, NodeId last) {
  std::vector<NodeId> path(sets.size());
  path.back() = last;
  for (std::size_t i = sets.size() - 1; i-- > 0;) {
    for (NodeId u = 0; u < a.size(); ++u) {
      if (sets[i][u] && a.edge(u, path[i + 1])) {
        path[i] = u;
        break;
      }
    }
  }
  return path;
}

Automaton::Automaton(std::vector<std::vector<bool>> transitions, std::vector<Label> labels) {
  const std::size_t n = labels.size();
  if (n == 0) fail(ErrorKind::invalid_params, "automaton must have at least one node");
  if (transitions.size() != n) fail(ErrorKind::invalid_params, "transition matrix must be N x N with N = |s|");
  for (const auto& row : transitions)
    if (row.size() != n) fail(ErrorKind::invalid_params, "transition matrix must be N x N with N = |s|");
  for (Label l : labels)
    if (l > 1) fail(ErrorKind::invalid_params, "node labels must be 0 or 1");

  std::vector<char> alive(n, 1);
  std::vector<std::size_t> out_degree(n, 0);
  std::deque<NodeId> dead;
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId w = 0; w < n; ++w) out_degree[v] += transitions[v][w] ? 1 : 0;
    if (out_degree[v] == 0) dead.push_back(v);
  }
  while (!dead.empty()) {
    NodeId v = dead.front();
    dead.pop_front();
    if (!alive[v]) continue;
    alive[v] = 0;
    for (NodeId u = 0; u < n; ++u) {
      if (alive[u] && transitions[u][v] && --out_degree[u] == 0) dead.push_back(u);
    }
  }
  for (NodeId v = 0; v < n; ++v)
    if (alive[v]) original_ids_.push_back(v);
  if (original_ids_.empty()) fail(ErrorKind::empty_automaton, "pruning removed every node: no infinite admissible signal");
  pruned_count_ = n - original_ids_.size();

  const std::size_t m = original_ids_.size();
  transitions_.assign(m, std::vector<bool>(m, false));
  successors_.assign(m, {});
  labels_.resize(m);
  for (NodeId i = 0; i < m; ++i) {
    labels_[i] = labels[original_ids_[i]];
    for (NodeId j = 0; j < m; ++j) {
      if (transitions[original_ids_[i]][original_ids_[j]]) {
        transitions_[i][j] = true;
        successors_[i].push_back(j);
      }
    }
  }
}

void Automaton::compose_original_ids(const std::vector<NodeId>& outer) {
  for (auto& id : original_ids_) id = outer.at(id);
}

Automaton prune(std::vector<std::vector<bool>> transitions, std::vector<Label> labels) {
  return Automaton(std::move(transitions), std::move(labels));
}

void for_each_word(const Automaton& a, std::size_t length, const std::function<bool(const Word&)>& visit) {
  if (length == 0) return;
  std::vector<NodeSet> sets;
  Labels labels;
  bool stop = false;
  std::function<void()> dfs = [&]() {
    if (stop) return;
    if (labels.size() == length) {
      const NodeSet& last = sets.back();
      NodeId end = static_cast<NodeId>(std::find(last.begin(), last.end(), 1) - last.begin());
      Word w{labels, backtrack(a, sets, end)};
      if (!visit(w)) stop = true;
      return;
    }
    for (Label b : {Label{0}, Label{1}}) {
      NodeSet next = sets.empty() ? nodes_with_label(a, b) : step(a, sets.back(), b);
      if (!any(next)) continue;
      sets.push_back(std::move(next));
      labels.push_back(b);
      dfs();
      labels.pop_back();
      sets.pop_back();
      if (stop) return;
    }
  };
  dfs();
}

std::vector<Word> enumerate_words(const Automaton& a, std::size_t length) {
  std::vector<Word> out;
  for_each_word(a, length, [&](const Word& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

std::vector<CycleWord> enumerate_cycle_words(const Automaton& a, std::size_t length) {
  std::map<Labels, CycleWord> found;
  if (length == 0) return {};
  for (NodeId start = 0; start < a.size(); ++start) {
    std::vector<NodeSet> sets;
    NodeSet init(a.size(), 0);
    init[start] = 1;
    sets.push_back(init);
    Labels labels{a.label(start)};
    std::function<void()> dfs = [&]() {
      if (labels.size() == length) {
        if (found.count(labels)) return;
        const NodeSet& last = sets.back();
        for (NodeId v = 0; v < a.size(); ++v) {
          if (last[v] && a.edge(v, start)) {
            CycleWord c;
            c.labels = labels;
            c.path = backtrack(a, sets, v);
            found.emplace(labels, std::move(c));
            return;
          }
        }
        return;
      }
      for (Label b : {Label{0}, Label{1}}) {
        NodeSet next = step(a, sets.back(), b);
        if (!any(next)) continue;
        sets.push_back(std::move(next));
        labels.push_back(b);
        dfs();
        labels.pop_back();
        sets.pop_back();
      }
    };
    dfs();
  }
  std::vector<CycleWord> out;
  out.reserve(found.size());
  for (auto& [labels, cycle] : found) out.push_back(std::move(cycle));
  return out;
}

Automaton reverse(const Automaton& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<bool>> t(n, std::vector<bool>(n, false));
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) t[j][i] = a.edge(i, j);
  Automaton r(std::move(t), a.labels());
  r.compose_original_ids(a.original_ids());
  return r;
}

Automaton build_max_dropouts(std::size_t max_losses) {
  const std::size_t n = max_losses + 1;
  const NodeId delivered = max_losses;
  std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
  std::vector<Label> s(n, 0);
  s[delivered] = 1;
  for (NodeId i = 0; i < max_losses; ++i) {
    if (i + 1 < max_losses) m[i][i + 1] = true;
    m[i][delivered] = true;
  }
  m[delivered][delivered] = true;
  if (max_losses > 0) m[delivered][0] = true;
  return Automaton(std::move(m), std::move(s));
}

Automaton build_mk_firmness(std::size_t window, std::size_t required) {
  if (required < 1 || required > window)
    fail(ErrorKind::invalid_params, "(m,k)-firmness needs 1 <= k <= m");
  if (window == 1) return Automaton({{true}}, {1});
  const std::size_t history = window - 1;
  if (history > 20) fail(ErrorKind::invalid_params, "(m,k)-firmness window too large");
  const std::size_t n = std::size_t{1} << history;
  const std::size_t mask = n - 1;
  std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
  std::vector<Label> s(n);
  for (std::size_t h = 0; h < n; ++h) {
    s[h] = static_cast<Label>(h & 1U);
    const auto ones = static_cast<std::size_t>(__builtin_popcountll(h));
    for (std::size_t b = 0; b <= 1; ++b) {
      if (ones + b >= required) m[h][((h << 1U) | b) & mask] = true;
    }
  }
  return Automaton(std::move(m), std::move(s));
}

bool language_equal_up_to(const Automaton& a, const Automaton& b, std::size_t depth) {
  std::function<bool(const NodeSet&, const NodeSet&, std::size_t)> dfs =
      [&](const NodeSet& sa, const NodeSet& sb, std::size_t len) {
        if (len == depth) return true;
        for (Label l : {Label{0}, Label{1}}) {
          NodeSet na = len == 0 ? nodes_with_label(a, l) : step(a, sa, l);
          NodeSet nb = len == 0 ? nodes_with_label(b, l) : step(b, sb, l);
          bool ea = any(na);
          bool eb = any(nb);
          if (ea != eb) return false;
          if (ea && !dfs(na, nb, len + 1)) return false;
        }
        return true;
      };
  return dfs(NodeSet(a.size(), 1), NodeSet(b.size(), 1), 0);
}

std::optional<std::vector<NodeId>> find_path(const Automaton& a, const Labels& labels) {
  if (labels.empty()) return std::vector<NodeId>{};
  std::vector<NodeSet> sets;
  sets.push_back(nodes_with_label(a, labels[0]));
  if (!any(sets.back())) return std::nullopt;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    sets.push_back(step(a, sets.back(), labels[i]));
    if (!any(sets.back())) return std::nullopt;
  }
  const NodeSet& last = sets.back();
  NodeId end = static_cast<NodeId>(std::find(last.begin(), last.end(), 1) - last.begin());
  return backtrack(a, sets, end);
}

bool is_walk(const Automaton& a, const std::vector<NodeId>& path, const Labels& labels) {
  if (path.size() != labels.size()) return false;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= a.size() || a.label(path[i]) != labels[i]) return false;
    if (i > 0 && !a.edge(path[i - 1], path[i])) return false;
  }
  return true;
}

bool is_closed_walk(const Automaton& a, const std::vector<NodeId>& path, const Labels& labels) {
  return !path.empty() && is_walk(a, path, labels) && a.edge(path.back(), path.front());
}

std::optional<CycleWord> cycle_through(const Automaton& a, NodeId node) {
  // Breadth-first from node's successors until node is reached again.
  std::vector<std::optional<NodeId>> parent(a.size());
  std::vector<char> seen(a.size(), 0);
  std::deque<NodeId> queue;
  for (NodeId w : a.successors(node)) {
    if (w == node) {
      CycleWord c;
      c.path = {node};
      c.labels = {a.label(node)};
      return c;
    }
    if (!seen[w]) {
      seen[w] = 1;
      queue.push_back(w);
    }
  }
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : a.successors(v)) {
      if (w == node) {
        std::vector<NodeId> rev{v};
        while (parent[rev.back()]) rev.push_back(*parent[rev.back()]);
        CycleWord c;
        c.path.push_back(node);
        c.path.insert(c.path.end(), rev.rbegin(), rev.rend());
        for (NodeId p : c.path) c.labels.push_back(a.label(p));
        return c;
      }
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  return std::nullopt;
}

std::pair<Word, CycleWord> lasso_from(const Automaton& a, NodeId from) {
  std::vector<std::optional<NodeId>> parent(a.size());
  std::vector<char> seen(a.size(), 0);
  std::deque<NodeId> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    if (auto cycle = cycle_through(a, v)) {
      std::vector<NodeId> rev;
      for (auto p = parent[v]; p; p = parent[*p]) rev.push_back(*p);
      Word prefix;
      prefix.path.assign(rev.rbegin(), rev.rend());
      for (NodeId p : prefix.path) prefix.labels.push_back(a.label(p));
      return {prefix, *cycle};
    }
    for (NodeId w : a.successors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  fail(ErrorKind::internal, "pruned automaton without a reachable cycle");
}

std::string labels_to_string(const Labels& labels) {
  std::string s = "(";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) s += ',';
    s += labels[i] ? '1' : '0';
  }
  return s + ")";
}

}  // namespace dropctl
