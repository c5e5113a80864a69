#include "dropctl/delays.hpp"

#include <algorithm>

#include "dropctl/error.hpp"
#include "dropctl/linalg.hpp"

namespace dropctl {

void DelaySystem::normalize() {
  if (delays.empty()) fail(ErrorKind::invalid_params, "delay set must be non-empty");
  std::sort(delays.begin(), delays.end());
  delays.erase(std::unique(delays.begin(), delays.end()), delays.end());
  if (!a.square()) fail(ErrorKind::shape_mismatch, "A must be square");
  if (b.rows() != a.rows()) fail(ErrorKind::shape_mismatch, "B must have as many rows as A");
}

RatMatrix delay_reach_matrix(const DelaySystem& sys, const DelaySignal& d, std::size_t t) {
  if (!sys.a.square() || sys.b.rows() != sys.a.rows()) fail(ErrorKind::shape_mismatch, "inconsistent (A, B)");
  if (d.size() < t) fail(ErrorKind::shape_mismatch, "delay signal shorter than the horizon");
  const std::size_t n = sys.a.rows();
  std::vector<RatMatrix> blocks;
  for (std::size_t i = 1; i <= t; ++i) {
    const std::size_t arrival = i + d[i - 1];
    if (arrival <= t)
      blocks.push_back(power(sys.a, t - arrival) * sys.b);
    else
      blocks.push_back(RatMatrix::zero(n, sys.b.cols()));
  }
  return hstack(blocks, n);
}

Labels actuation_signal(const DelaySignal& d, std::size_t t) {
  if (d.size() < t) fail(ErrorKind::shape_mismatch, "delay signal shorter than the horizon");
  Labels tau(t, 0);
  for (std::size_t s = 0; s < t; ++s)
    if (s + d[s] < t) tau[s + d[s]] = 1;
  return tau;
}

DeBruijnAutomaton de_bruijn_automaton(const std::vector<std::size_t>& delays_in) {
  std::vector<std::size_t> delays = delays_in;
  if (delays.empty()) fail(ErrorKind::invalid_params, "delay set must be non-empty");
  std::sort(delays.begin(), delays.end());
  delays.erase(std::unique(delays.begin(), delays.end()), delays.end());
  const std::size_t k = delays.size();
  const std::size_t width = delays.back() + 1;
  std::size_t count = 1;
  for (std::size_t i = 0; i < width; ++i) {
    if (count > (std::size_t{1} << 22) / k) fail(ErrorKind::budget_exceeded, "De Bruijn automaton too large");
    count *= k;
  }

  // digits[i] indexes delays; v_0 is the most significant digit.
  std::vector<std::vector<std::size_t>> tuples(count);
  std::vector<std::vector<std::size_t>> digits(count, std::vector<std::size_t>(width));
  for (std::size_t node = 0; node < count; ++node) {
    std::size_t rest = node;
    for (std::size_t i = width; i-- > 0;) {
      digits[node][i] = rest % k;
      rest /= k;
    }
    for (std::size_t i = 0; i < width; ++i) tuples[node].push_back(delays[digits[node][i]]);
  }
  std::size_t high = count / k;  // weight of v_0
  std::vector<std::vector<bool>> m(count, std::vector<bool>(count, false));
  std::vector<Label> labels(count, 0);
  for (std::size_t node = 0; node < count; ++node) {
    for (std::size_t i = 0; i < width; ++i)
      if (tuples[node][i] == i) labels[node] = 1;
    // (v_0..v_dmax) -> (d, v_0..v_{dmax-1}): drop the last digit, prepend d.
    const std::size_t shifted = node / k;
    for (std::size_t j = 0; j < k; ++j) m[node][j * high + shifted] = true;
  }
  return DeBruijnAutomaton{Automaton(std::move(m), std::move(labels)), std::move(tuples), delays.back()};
}

namespace {

const Verdict* failing_leaf(const Verdict& v) {
  if (v.status != Status::fails) return nullptr;
  if (auto* comp = std::get_if<CompositeCert>(&v.certificate)) {
    for (const Verdict& part : comp->parts)
      if (auto* leaf = failing_leaf(part)) return leaf;
    return nullptr;
  }
  return &v;
}

std::vector<std::size_t> delays_along(const DeBruijnAutomaton& db, const std::vector<NodeId>& path) {
  std::vector<std::size_t> out;
  for (NodeId node : path) out.push_back(db.delay_at(node));
  return out;
}

}  // namespace

Verdict decide_delay_controllability(const DelaySystem& sys_in, const PropertyOptions& options) {
  DelaySystem sys = sys_in;
  sys.normalize();
  DeBruijnAutomaton db = de_bruijn_automaton(sys.delays);
  Verdict v = decide_controllability(sys.a, sys.b, db.automaton, options);
  v.property = "delay-controllability";
  v.reduction_trace.insert(v.reduction_trace.begin(), "de-bruijn-reduction");
  if (const Verdict* leaf = failing_leaf(v)) {
    DelayWitness w;
    w.shift = db.shift;
    // De Bruijn graphs lose no node under reversal, so node ids agree.
    const bool reversed = leaf->subject && leaf->subject->reversed_automaton;
    if (auto* cyc = std::get_if<CycleCert>(&leaf->certificate)) {
      std::vector<NodeId> path = cyc->cycle.path;
      if (reversed) std::reverse(path.begin(), path.end());
      w.cycle = delays_along(db, path);
      if (!reversed) w.prefix = delays_along(db, cyc->prefix.path);
    } else if (auto* lasso = std::get_if<LassoCert>(&leaf->certificate)) {
      w.prefix = delays_along(db, lasso->prefix.path);
      w.cycle = delays_along(db, lasso->cycle.path);
    }
    v.delay_witness = std::move(w);
  }
  return v;
}

bool verify_image_link(const DelaySystem& sys, const DelaySignal& d, std::size_t t) {
  RatMatrix delayed = delay_reach_matrix(sys, d, t);
  RatMatrix dropped = reachability_matrix(sys.a, sys.b, actuation_signal(d, t));
  const std::size_t r = rank(delayed);
  return r == rank(dropped) && r == rank(hstack(delayed, dropped));
}

std::optional<bool> verify_maxdrop_delay_equivalence(const RatMatrix& a, const RatMatrix& b, std::size_t max_losses,
                                                     const PropertyOptions& options) {
  Verdict dropout = decide_controllability(a, b, build_max_dropouts(max_losses), options);
  DelaySystem sys{a, b, {}};
  for (std::size_t d = 0; d <= max_losses; ++d) sys.delays.push_back(d);
  Verdict delayed = decide_delay_controllability(sys, options);
  if (dropout.status == Status::inconclusive || delayed.status == Status::inconclusive) return std::nullopt;
  return dropout.status == delayed.status;
}

}  // namespace dropctl
