#include "dropctl/observability.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "dropctl/error.hpp"

namespace dropctl {

namespace {

void check_output_pair(const RatMatrix& a, const RatMatrix& c) {
  if (!a.square()) fail(ErrorKind::shape_mismatch, "A must be square");
  if (c.cols() != a.rows()) fail(ErrorKind::shape_mismatch, "C must have as many columns as A");
}

void check_input_pair(const RatMatrix& a, const RatMatrix& b) {
  if (!a.square()) fail(ErrorKind::shape_mismatch, "A must be square");
  if (b.rows() != a.rows()) fail(ErrorKind::shape_mismatch, "B must have as many rows as A");
}

// Kernel of the observability matrix of prefix . cycle^repeats, built row
// block by row block.
Subspace periodic_kernel(RowPowers& powers, const Labels& prefix, const Labels& cycle, std::size_t repeats) {
  Subspace k = Subspace::full(powers.state_dim());
  std::size_t t = 0;
  for (Label l : prefix) {
    if (l) k = k.intersect_kernel(powers.at(t));
    ++t;
    if (k.is_zero()) return k;
  }
  for (std::size_t r = 0; r < repeats; ++r) {
    for (Label l : cycle) {
      if (l) k = k.intersect_kernel(powers.at(t));
      ++t;
      if (k.is_zero()) return k;
    }
  }
  return k;
}

// Closed walks of the given length whose first period alone is still rank
// deficient; all others are observable and skipped. Keyed by label sequence.
std::map<Labels, std::vector<NodeId>> candidate_cycles(const Automaton& aut, RowPowers& powers, std::size_t length) {
  std::map<Labels, std::vector<NodeId>> found;
  const std::size_t n = powers.state_dim();
  for (NodeId start = 0; start < aut.size(); ++start) {
    std::vector<NodeSet> sets;
    std::vector<Subspace> kernels;
    NodeSet init(aut.size(), 0);
    init[start] = 1;
    Subspace k0 = Subspace::full(n);
    if (aut.label(start)) k0 = k0.intersect_kernel(powers.at(0));
    if (k0.is_zero()) continue;
    sets.push_back(std::move(init));
    kernels.push_back(std::move(k0));
    Labels labels{aut.label(start)};
    std::function<void()> dfs = [&]() {
      if (labels.size() == length) {
        if (found.count(labels)) return;
        const NodeSet& last = sets.back();
        for (NodeId v = 0; v < aut.size(); ++v) {
          if (last[v] && aut.edge(v, start)) {
            found.emplace(labels, backtrack(aut, sets, v));
            return;
          }
        }
        return;
      }
      const std::size_t t = labels.size();
      for (Label b : {Label{0}, Label{1}}) {
        NodeSet next = step(aut, sets.back(), b);
        if (!any(next)) continue;
        Subspace k = b ? kernels.back().intersect_kernel(powers.at(t)) : kernels.back();
        if (k.is_zero()) continue;
        sets.push_back(std::move(next));
        kernels.push_back(std::move(k));
        labels.push_back(b);
        dfs();
        labels.pop_back();
        kernels.pop_back();
        sets.pop_back();
      }
    };
    dfs();
  }
  return found;
}

struct FailingCycle {
  Labels labels;
  std::vector<NodeId> path;
  std::vector<Rational> witness;
};

std::optional<FailingCycle> first_failing_cycle(const std::map<Labels, std::vector<NodeId>>& candidates,
                                                RowPowers& powers, unsigned jobs) {
  const std::size_t n = powers.state_dim();
  std::vector<std::pair<Labels, std::vector<NodeId>>> list(candidates.begin(), candidates.end());
  if (list.empty()) return std::nullopt;
  auto test = [&](std::size_t i) -> std::optional<FailingCycle> {
    Subspace k = periodic_kernel(powers, {}, list[i].first, n);
    if (k.is_zero()) return std::nullopt;
    return FailingCycle{list[i].first, list[i].second, k.columns().col_vector(0)};
  };
  if (jobs <= 1 || list.size() < 2) {
    for (std::size_t i = 0; i < list.size(); ++i)
      if (auto f = test(i)) return f;
    return std::nullopt;
  }
  // Warm the power cache so workers only read it.
  powers.at(list.back().first.size() * n);
  const std::size_t workers = std::min<std::size_t>(jobs, list.size());
  std::vector<std::future<std::optional<std::pair<std::size_t, FailingCycle>>>> futures;
  for (std::size_t w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w]() -> std::optional<std::pair<std::size_t, FailingCycle>> {
      for (std::size_t i = w; i < list.size(); i += workers)
        if (auto f = test(i)) return std::make_pair(i, std::move(*f));
      return std::nullopt;
    }));
  }
  std::optional<std::pair<std::size_t, FailingCycle>> best;
  for (auto& f : futures) {
    auto r = f.get();
    if (r && (!best || r->first < best->first)) best = std::move(r);
  }
  if (!best) return std::nullopt;
  return std::move(best->second);
}

}  // namespace

RatMatrix observability_matrix(const RatMatrix& a, const RatMatrix& c, const Labels& labels) {
  check_output_pair(a, c);
  std::vector<RatMatrix> blocks;
  RatMatrix row = c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    blocks.push_back(labels[i] ? row : RatMatrix::zero(c.rows(), c.cols()));
    if (i + 1 < labels.size()) row = row * a;
  }
  return vstack(blocks, a.rows());
}

RatMatrix reachability_matrix(const RatMatrix& a, const RatMatrix& b, const Labels& labels) {
  check_input_pair(a, b);
  const std::size_t t = labels.size();
  std::vector<RatMatrix> blocks;
  RatMatrix col = b;
  for (std::size_t j = 0; j < t; ++j) {
    blocks.push_back(labels[t - 1 - j] ? col : RatMatrix::zero(b.rows(), b.cols()));
    if (j + 1 < t) col = a * col;
  }
  return hstack(blocks, a.rows());
}

ObsMatrix obs_matrix(const RatMatrix& a, const RatMatrix& c, const Word& w) {
  return {observability_matrix(a, c, w.labels), w};
}

ReachMatrix reach_matrix(const RatMatrix& a, const RatMatrix& b, const Word& w) {
  return {reachability_matrix(a, b, w.labels), w};
}

Labels unroll(const Labels& prefix, const Labels& cycle, std::size_t repeats) {
  Labels out = prefix;
  for (std::size_t r = 0; r < repeats; ++r) out.insert(out.end(), cycle.begin(), cycle.end());
  return out;
}

std::optional<std::vector<Rational>> lasso_unobservable(const RatMatrix& a, const RatMatrix& c,
                                                        const Labels& prefix, const Labels& cycle) {
  check_output_pair(a, c);
  if (cycle.empty()) fail(ErrorKind::invalid_params, "cycle must be non-empty");
  const std::size_t n = a.rows();
  auto basis = kernel_basis(observability_matrix(a, c, unroll(prefix, cycle, n)));
  if (basis.empty()) return std::nullopt;
  return basis.front();
}

std::optional<std::vector<Rational>> cycle_unobservable(const RatMatrix& a, const RatMatrix& c,
                                                        const CycleWord& cyc) {
  return lasso_unobservable(a, c, {}, cyc.labels);
}

// ---------------------------------------------------------------------------

RowPowers::RowPowers(RatMatrix a, RatMatrix c) : a_(std::move(a)) { rows_.push_back(std::move(c)); }

const RatMatrix& RowPowers::at(std::size_t i) {
  while (rows_.size() <= i) rows_.push_back(rows_.back() * a_);
  return rows_[i];
}

WordSweeper::WordSweeper(const RatMatrix& a, const RatMatrix& c, const Automaton& automaton)
    : automaton_(&automaton), powers_(a, c) {
  check_output_pair(a, c);
  frontier_.push_back(State{NodeSet(automaton.size(), 1), Subspace::full(a.rows()), {}});
}

void WordSweeper::advance() {
  std::vector<State> next;
  std::set<std::pair<NodeSet, std::string>> seen;
  for (const State& s : frontier_) {
    for (Label b : {Label{0}, Label{1}}) {
      NodeSet nodes = depth_ == 0 ? nodes_with_label(*automaton_, b) : step(*automaton_, s.nodes, b);
      if (!any(nodes)) continue;
      Subspace k = b ? s.kernel.intersect_kernel(powers_.at(depth_)) : s.kernel;
      if (k.is_zero()) continue;
      if (!seen.emplace(nodes, k.key()).second) continue;
      Labels labels = s.labels;
      labels.push_back(b);
      next.push_back(State{std::move(nodes), std::move(k), std::move(labels)});
    }
  }
  frontier_ = std::move(next);
  ++depth_;
}

std::optional<Word> WordSweeper::counterexample() const {
  if (frontier_.empty()) return std::nullopt;
  Word w;
  w.labels = frontier_.front().labels;
  auto path = find_path(*automaton_, w.labels);
  if (!path) fail(ErrorKind::internal, "sweep produced an inadmissible word");
  w.path = std::move(*path);
  return w;
}

SweepResult sweep_words(const RatMatrix& a, const RatMatrix& c, const Automaton& automaton, std::size_t length) {
  if (length == 0) fail(ErrorKind::invalid_params, "sweep length must be positive");
  WordSweeper sweeper(a, c, automaton);
  while (sweeper.depth() < length && !sweeper.all_full_rank()) sweeper.advance();
  if (sweeper.all_full_rank()) return {true, std::nullopt};
  return {false, sweeper.counterexample()};
}

std::size_t default_max_depth(std::size_t state_dim, std::size_t automaton_size) {
  return std::max<std::size_t>(1, 3 * state_dim * automaton_size);
}

// ---------------------------------------------------------------------------

SkolemBound compute_skolem_bound(const RatMatrix& a) {
  if (!a.square()) fail(ErrorKind::shape_mismatch, "A must be square");
  SkolemBound bound;
  bound.denominator_lcm = lcm_of_denominators(a);
  Rational det = determinant(a * Rational(bound.denominator_lcm));
  if (sgn(det) == 0) fail(ErrorKind::singular_matrix, "period bound needs a regular A");
  bound.scaled_determinant = det.get_num();
  BigInt p = 2;
  while (mpz_divisible_p(bound.scaled_determinant.get_mpz_t(), p.get_mpz_t())) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
  }
  bound.prime = p;
  const std::size_t n = a.rows();
  mpz_pow_ui(bound.period.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n * n));
  return bound;
}

// ---------------------------------------------------------------------------

namespace {

Verdict singular_observability(const RatMatrix& a, const RatMatrix& c, const Automaton& aut, Verdict v) {
  const std::size_t n = a.rows();
  v.reduction_trace.push_back("singular A: settled directly");
  for (NodeId u = 0; u < aut.size(); ++u) {
    if (aut.label(u) != 0) continue;
    // x0 in ker A is invisible: the first sample is lost and A x0 = 0.
    auto [prefix, cycle] = lasso_from(aut, u);
    CycleCert cert;
    if (prefix.path.empty()) {
      cert.cycle = std::move(cycle);
    } else {
      cert.prefix = std::move(prefix);
      cert.cycle = std::move(cycle);
    }
    cert.witness = kernel_basis(a).front();
    v.status = Status::fails;
    v.certificate = std::move(cert);
    return v;
  }
  // All labels are 1: only the all-ones signal is admissible.
  Labels ones(n, 1);
  auto kernel = kernel_basis(observability_matrix(a, c, ones));
  if (kernel.empty()) {
    v.status = Status::holds;
    v.certificate = HorizonCert{n};
    return v;
  }
  auto [prefix, cycle] = lasso_from(aut, 0);
  CycleCert cert;
  cert.prefix = std::move(prefix);
  cert.cycle = std::move(cycle);
  cert.witness = kernel.front();
  v.status = Status::fails;
  v.certificate = std::move(cert);
  return v;
}

}  // namespace

Verdict decide_observability(const RatMatrix& a, const RatMatrix& c, const Automaton& aut,
                             const DecisionOptions& options) {
  check_output_pair(a, c);
  const std::size_t n = a.rows();
  Verdict v;
  v.property = "observability";
  v.subject = Subject{Subject::Kind::observability, a, c, false};
  if (n == 0) {
    v.status = Status::holds;
    v.certificate = TrivialCert{"zero-dimensional state space"};
    return v;
  }
  if (sgn(determinant(a)) == 0) return singular_observability(a, c, aut, std::move(v));

  const std::size_t max_depth = options.max_depth ? options.max_depth : default_max_depth(n, aut.size());
  RowPowers powers(a, c);
  WordSweeper sweeper(a, c, aut);
  for (std::size_t d = 1; d <= max_depth; ++d) {
    auto candidates = candidate_cycles(aut, powers, d);
    if (auto failing = first_failing_cycle(candidates, powers, options.jobs)) {
      CycleCert cert;
      cert.cycle.labels = std::move(failing->labels);
      cert.cycle.path = std::move(failing->path);
      cert.witness = std::move(failing->witness);
      v.status = Status::fails;
      v.certificate = std::move(cert);
      return v;
    }
    sweeper.advance();
    if (sweeper.all_full_rank()) {
      v.status = Status::holds;
      v.certificate = HorizonCert{d};
      return v;
    }
  }
  DepthCert cert;
  cert.max_depth_reached = max_depth;
  SkolemBound bound = compute_skolem_bound(a);
  cert.period_bound = bound.period;
  cert.theoretical_bound = bound.cycle_length(aut.size());
  cert.bound_for_rationalized_input = options.rationalized_input;
  v.status = Status::inconclusive;
  v.certificate = std::move(cert);
  return v;
}

}  // namespace dropctl
