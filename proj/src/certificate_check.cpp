#include "dropctl/certificate_check.hpp"

#include <set>

#include "dropctl/error.hpp"
#include "dropctl/linalg.hpp"
#include "dropctl/observability.hpp"
#include "dropctl/properties.hpp"

namespace dropctl {

namespace {

CheckResult reject(std::string reason) { return {false, std::move(reason)}; }

// Shape of the reduced problems a property breaks into.
struct Expected {
  enum class Kind { trivial, leaf, composite } kind = Kind::trivial;
  Subject subject;
  std::vector<Expected> parts;
};

Expected leaf(Subject::Kind kind, RatMatrix a, RatMatrix companion, bool reversed) {
  Expected e;
  e.kind = Expected::Kind::leaf;
  e.subject = Subject{kind, std::move(a), std::move(companion), reversed};
  return e;
}

Expected observability_of(const RatMatrix& a, const RatMatrix& c) {
  if (a.rows() == 0) return {};
  return leaf(Subject::Kind::observability, a, c, false);
}

Expected regular_reachability_of(const RatMatrix& a, const RatMatrix& b) {
  return leaf(Subject::Kind::observability, a.transpose(), b.transpose(), true);
}

Expected reachability_of(const RatMatrix& a, const RatMatrix& b) {
  RegularNilpotentSplit split = regular_nilpotent_split(a, b, Side::input);
  const bool reg = split.regular_dim() > 0;
  const bool nil = split.second.rows() > 0;
  if (!reg && !nil) return {};
  Expected r = reg ? regular_reachability_of(split.first, split.companion_first) : Expected{};
  Expected s = nil ? leaf(Subject::Kind::nilpotent_reachability, split.second, split.companion_second, false)
                   : Expected{};
  if (!nil) return r;
  if (!reg) return s;
  Expected e;
  e.kind = Expected::Kind::composite;
  e.parts = {std::move(r), std::move(s)};
  return e;
}

Expected expected_for(const std::string& property, const RatMatrix& a, const RatMatrix& m, double margin) {
  if (property == "observability") return observability_of(a, m);
  if (property == "constructibility") {
    RegularNilpotentSplit split = regular_nilpotent_split(a, m, Side::output);
    if (split.regular_dim() == 0) return {};
    return observability_of(split.first, split.companion_first);
  }
  if (property == "reachability" || property == "controllability" || property == "delay-controllability")
    return reachability_of(a, m);
  if (property == "zero-controllability") {
    RegularNilpotentSplit split = regular_nilpotent_split(a, m, Side::input);
    if (split.regular_dim() == 0) return {};
    return regular_reachability_of(split.first, split.companion_first);
  }
  if (property == "detectability") {
    UnstableBlock part = unstable_block(a, m, Side::output, margin);
    if (part.a.rows() == 0) return {};
    return observability_of(part.a, part.companion);
  }
  if (property == "stabilizability") {
    UnstableBlock part = unstable_block(a, m, Side::input, margin);
    if (part.a.rows() == 0) return {};
    return reachability_of(part.a, part.companion);
  }
  fail(ErrorKind::invalid_params, "unknown property '" + property + "'");
}

Status combine(const std::vector<Verdict>& parts) {
  bool all_hold = true;
  for (const Verdict& p : parts) {
    if (p.status == Status::fails) return Status::fails;
    all_hold = all_hold && p.status == Status::holds;
  }
  return all_hold ? Status::holds : Status::inconclusive;
}

CheckResult check_against(const Verdict& v, const Expected& e, const Automaton& aut, const Automaton& rev) {
  switch (e.kind) {
    case Expected::Kind::trivial: {
      if (v.status != Status::holds || !std::holds_alternative<TrivialCert>(v.certificate))
        return reject("expected a trivially holding verdict");
      return {};
    }
    case Expected::Kind::composite: {
      auto* comp = std::get_if<CompositeCert>(&v.certificate);
      if (!comp || comp->parts.size() != e.parts.size()) return reject("expected a composite certificate");
      if (combine(comp->parts) != v.status) return reject("composite status does not follow from its parts");
      for (std::size_t i = 0; i < e.parts.size(); ++i) {
        CheckResult r = check_against(comp->parts[i], e.parts[i], aut, rev);
        if (!r.ok) return reject("part " + std::to_string(i) + ": " + r.reason);
      }
      return {};
    }
    case Expected::Kind::leaf: break;
  }
  if (!v.subject) return reject("leaf verdict carries no subject");
  const Subject& s = *v.subject;
  if (s.kind != e.subject.kind || s.reversed_automaton != e.subject.reversed_automaton || !(s.a == e.subject.a) ||
      !(s.companion == e.subject.companion))
    return reject("subject does not match the reduction of the input system");
  const Automaton& target = s.reversed_automaton ? rev : aut;
  if (s.kind == Subject::Kind::observability) return check_observability_certificate(v, s.a, s.companion, target);
  return check_nilpotent_certificate(v, s.a, s.companion, target);
}

CheckResult check_lasso_shape(const Automaton& aut, const Word& prefix, const CycleWord& cycle) {
  if (cycle.labels.empty()) return reject("empty cycle");
  if (!is_closed_walk(aut, cycle.path, cycle.labels)) return reject("cycle is not a closed walk of the automaton");
  if (!prefix.path.empty()) {
    if (!is_walk(aut, prefix.path, prefix.labels)) return reject("prefix is not a walk of the automaton");
    if (!aut.edge(prefix.path.back(), cycle.path.front())) return reject("prefix does not lead into the cycle");
  } else if (!prefix.labels.empty()) {
    return reject("prefix labels without a path");
  }
  return {};
}

}  // namespace

bool is_output_property(const std::string& p) {
  return p == "observability" || p == "constructibility" || p == "detectability";
}

bool is_input_property(const std::string& p) {
  return p == "reachability" || p == "controllability" || p == "zero-controllability" || p == "stabilizability" ||
         p == "delay-controllability";
}

CheckResult check_observability_certificate(const Verdict& v, const RatMatrix& a, const RatMatrix& c,
                                            const Automaton& aut) {
  const std::size_t n = a.rows();
  switch (v.status) {
    case Status::holds: {
      if (std::holds_alternative<TrivialCert>(v.certificate))
        return n == 0 ? CheckResult{} : reject("trivial certificate for a non-empty state space");
      auto* h = std::get_if<HorizonCert>(&v.certificate);
      if (!h || h->horizon == 0) return reject("holds without a horizon");
      if (!sweep_words(a, c, aut, h->horizon).all_full_rank)
        return reject("some admissible word of length " + std::to_string(h->horizon) + " is rank deficient");
      return {};
    }
    case Status::fails: {
      auto* cyc = std::get_if<CycleCert>(&v.certificate);
      if (!cyc) return reject("fails without a cycle certificate");
      if (auto r = check_lasso_shape(aut, cyc->prefix, cyc->cycle); !r.ok) return r;
      if (cyc->witness.size() != n || is_zero_vector(cyc->witness)) return reject("witness is zero or misshapen");
      RatMatrix o = observability_matrix(a, c, unroll(cyc->prefix.labels, cyc->cycle.labels, n));
      if (!is_zero_vector(o * cyc->witness)) return reject("witness is not annihilated");
      return {};
    }
    case Status::inconclusive:
      if (!std::holds_alternative<DepthCert>(v.certificate)) return reject("inconclusive without a depth record");
      return {};
  }
  return reject("unknown status");
}

CheckResult check_nilpotent_certificate(const Verdict& v, const RatMatrix& a, const RatMatrix& b,
                                        const Automaton& aut) {
  const std::size_t n = a.rows();
  if (n == 0) {
    if (v.status == Status::holds && std::holds_alternative<TrivialCert>(v.certificate)) return {};
    return reject("zero-dimensional subject must hold trivially");
  }
  std::size_t ell = 0;
  try {
    ell = nilpotency_index(a);
  } catch (const Error&) {
    return reject("subject matrix is not nilpotent");
  }
  const std::vector<bool> full = full_rank_windows(a, b, ell);
  const std::size_t wmask = full.size() - 1;
  switch (v.status) {
    case Status::holds: {
      auto* h = std::get_if<HorizonCert>(&v.certificate);
      if (!h || h->horizon == 0) return reject("holds without a horizon");
      // Every run of (node, window) states must hit a full-rank window by T.
      std::set<std::pair<NodeId, std::size_t>> live;
      for (NodeId u = 0; u < aut.size(); ++u)
        if (!full[aut.label(u)]) live.emplace(u, aut.label(u));
      for (std::size_t t = 1; t < h->horizon && !live.empty(); ++t) {
        std::set<std::pair<NodeId, std::size_t>> next;
        for (auto [u, mask] : live)
          for (NodeId w : aut.successors(u)) {
            std::size_t m = ((mask << 1) | aut.label(w)) & wmask;
            if (!full[m]) next.emplace(w, m);
          }
        live = std::move(next);
      }
      if (!live.empty()) return reject("a signal avoids full rank up to the horizon");
      return {};
    }
    case Status::fails: {
      auto* lasso = std::get_if<LassoCert>(&v.certificate);
      if (!lasso) return reject("fails without a lasso certificate");
      if (auto r = check_lasso_shape(aut, lasso->prefix, lasso->cycle); !r.ok) return r;
      // The window state is periodic once past prefix + ell steps.
      const std::size_t horizon = lasso->prefix.size() + ell + lasso->cycle.size();
      const std::size_t periods = (horizon + lasso->cycle.size() - 1) / lasso->cycle.size();
      Labels signal = unroll(lasso->prefix.labels, lasso->cycle.labels, periods);
      for (std::size_t t = 1; t <= horizon; ++t) {
        Labels head(signal.begin(), signal.begin() + static_cast<std::ptrdiff_t>(t));
        if (rank(reachability_matrix(a, b, head)) == n)
          return reject("reachability matrix reaches full rank at t = " + std::to_string(t));
      }
      return {};
    }
    case Status::inconclusive:
      return reject("the window check never ends inconclusive");
  }
  return reject("unknown status");
}

CheckResult verify_verdict(const Verdict& v, const RatMatrix& a, const RatMatrix& companion, const Automaton& aut,
                           double margin) {
  try {
    if (!is_output_property(v.property) && !is_input_property(v.property))
      return reject("unknown property '" + v.property + "'");
    Expected e = expected_for(v.property, a, companion, margin);
    return check_against(v, e, aut, reverse(aut));
  } catch (const Error& err) {
    return reject(err.what());
  }
}

CheckResult verify_delay_verdict(const Verdict& v, const DelaySystem& sys_in, double margin) {
  if (v.property != "delay-controllability") return reject("not a delay-controllability verdict");
  DelaySystem sys = sys_in;
  sys.normalize();
  DeBruijnAutomaton db = de_bruijn_automaton(sys.delays);
  return verify_verdict(v, sys.a, sys.b, db.automaton, margin);
}

}  // namespace dropctl
