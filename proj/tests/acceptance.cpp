// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dropctl/certificate_check.hpp"
#include "dropctl/delays.hpp"
#include "dropctl/error.hpp"
#include "dropctl/io.hpp"
#include "dropctl/oracle.hpp"
#include "dropctl/properties.hpp"
#include "test_support.hpp"

using namespace dropctl;
using namespace dropctl::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Everything criterion 9 has to re-verify.
struct Emitted {
  Verdict verdict;
  RatMatrix a;
  RatMatrix companion;
  Automaton automaton;
};

std::vector<Emitted> emitted;

void emit(const Verdict& v, const RatMatrix& a, const RatMatrix& companion, const Automaton& aut) {
  emitted.push_back({v, a, companion, aut});
}

bool is_rotation(const Labels& a, const Labels& b) {
  if (a.size() != b.size()) return false;
  Labels twice = b;
  twice.insert(twice.end(), b.begin(), b.end());
  return std::search(twice.begin(), twice.end(), a.begin(), a.end()) != twice.end();
}

Outcome criterion1() {
  Outcome out;
  RatMatrix a = cube27_a(), c = cube27_c();
  std::size_t classical = rank(observability_matrix(a, c, {1, 1, 1}));
  Automaton drop2 = build_max_dropouts(2), firm = build_mk_firmness(2, 1);
  Verdict fails = decide_observability(a, c, drop2);
  Verdict holds = decide_observability(a, c, firm);
  emit(fails, a, c, drop2);
  emit(holds, a, c, firm);
  const auto* cyc = std::get_if<CycleCert>(&fails.certificate);
  const auto* hor = std::get_if<HorizonCert>(&holds.certificate);
  out.pass = classical == 3 && fails.status == Status::fails && cyc && is_rotation(cyc->cycle.labels, {1, 0, 0}) &&
             holds.status == Status::holds && hor && hor->horizon <= 6;
  std::ostringstream s;
  s << "rank " << classical << ", maxdrop(2) " << to_string(fails.status);
  if (cyc) s << " cycle " << labels_to_string(cyc->cycle.labels);
  s << ", mk(2,1) " << to_string(holds.status);
  if (hor) s << " T=" << hor->horizon;
  if (const auto* bad = std::get_if<CycleCert>(&holds.certificate))
    s << " cycle " << labels_to_string(bad->cycle.labels) << " (A^3 = 27 I: period-3 signals see only C, CA)";
  out.detail = s.str();
  return out;
}

Outcome criterion2() {
  Outcome out;
  RatMatrix a = swap_a(), c = swap_c();
  Automaton drop3 = build_max_dropouts(3), firm = build_mk_firmness(4, 3);
  Verdict fails = decide_observability(a, c, drop3);
  Verdict holds = decide_observability(a, c, firm);
  emit(fails, a, c, drop3);
  emit(holds, a, c, firm);
  const auto* cyc = std::get_if<CycleCert>(&fails.certificate);
  out.pass = fails.status == Status::fails && cyc && is_rotation(cyc->cycle.labels, {1, 0}) &&
             holds.status == Status::holds;
  out.detail = std::string("maxdrop(3) ") + to_string(fails.status) +
               (cyc ? " cycle " + labels_to_string(cyc->cycle.labels) : "") + ", mk(4,3) " + to_string(holds.status);
  return out;
}

Outcome criterion3() {
  Outcome out;
  RatMatrix a = RatMatrix::zero(2, 2), b = RatMatrix::identity(2);
  Automaton aut = period_two();
  Verdict ctrl = decide_controllability(a, b, aut);
  Verdict dual = decide_observability(a.transpose(), b.transpose(), reverse(aut));
  emit(ctrl, a, b, aut);
  emit(dual, a.transpose(), b.transpose(), reverse(aut));
  out.pass = ctrl.status == Status::holds && dual.status == Status::fails;
  out.detail = std::string("controllable ") + to_string(ctrl.status) + ", dual observable " + to_string(dual.status);
  return out;
}

struct Instance {
  RatMatrix a, b, c;
  Automaton automaton;
};

std::vector<Instance> corpus() {
  Random rnd(2024);
  std::vector<Instance> out;
  for (int i = 0; i < 220; ++i) {
    std::size_t n = static_cast<std::size_t>(rnd.integer(1, 3));
    RatMatrix a = rnd.matrix(n, n, 5, 0.35);
    RatMatrix b = rnd.matrix(n, 1, 5, 0.4);
    RatMatrix c = rnd.matrix(1, n, 5, 0.4);
    out.push_back({a, b, c, rnd.automaton(4)});
  }
  return out;
}

bool concluded(const Verdict& v) { return v.status != Status::inconclusive; }
bool holds(const Verdict& v) { return v.status == Status::holds; }

Outcome criterion4(const std::vector<Instance>& instances) {
  Outcome out;
  std::size_t violations = 0, checked = 0, inconclusive_instances = 0;
  std::ostringstream bad;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& [a, b, c, aut] = instances[i];
    Automaton rev = reverse(aut);
    RatMatrix at = a.transpose(), ct = c.transpose();
    Verdict obs = decide_observability(a, c, aut);
    Verdict cons = decide_constructibility(a, c, aut);
    Verdict det = decide_detectability(a, c, aut);
    Verdict reach = decide_reachability(a, b, aut);
    Verdict ctrl = decide_controllability(a, b, aut);
    Verdict zero = decide_zero_controllability(a, b, aut);
    Verdict stab = decide_stabilizability(a, b, aut);
    Verdict dual_reach = decide_reachability(at, ct, rev);
    Verdict dual_zero = decide_zero_controllability(at, ct, rev);
    Verdict dual_stab = decide_stabilizability(at, ct, rev);
    for (const Verdict* v : {&obs, &cons, &det}) emit(*v, a, c, aut);
    for (const Verdict* v : {&reach, &ctrl, &zero, &stab}) emit(*v, a, b, aut);
    for (const Verdict* v : {&dual_reach, &dual_zero, &dual_stab}) emit(*v, at, ct, rev);

    bool any_inconclusive = false;
    for (const Verdict* v : {&obs, &cons, &det, &reach, &ctrl, &zero, &stab, &dual_reach, &dual_zero, &dual_stab})
      any_inconclusive |= !concluded(*v);
    if (any_inconclusive) ++inconclusive_instances;

    const bool regular = sgn(determinant(a)) != 0;
    auto check = [&](const char* name, bool applicable, bool ok) {
      if (!applicable) return;
      ++checked;
      if (!ok) {
        ++violations;
        bad << " [" << name << " #" << i << "]";
      }
    };
    // Implications are skipped when either side is inconclusive.
    check("a", concluded(obs) && concluded(cons), !holds(obs) || holds(cons));
    check("b", concluded(ctrl) && concluded(reach), ctrl.status == reach.status);
    check("c", concluded(reach) && concluded(zero), !holds(reach) || holds(zero));
    check("c-regular", regular && concluded(reach) && concluded(zero), reach.status == zero.status);
    check("d", regular && concluded(obs) && concluded(dual_reach), obs.status == dual_reach.status);
    check("e", concluded(cons) && concluded(dual_zero), cons.status == dual_zero.status);
    check("f", concluded(det) && concluded(dual_stab), det.status == dual_stab.status);
    check("g-output", concluded(obs) && concluded(det), !holds(obs) || holds(det));
    check("g-input", concluded(reach) && concluded(stab), !holds(reach) || holds(stab));
  }
  const double fraction = static_cast<double>(inconclusive_instances) / static_cast<double>(instances.size());
  out.pass = violations == 0 && fraction < 0.10;
  std::ostringstream s;
  s << instances.size() << " instances, " << checked << " relation checks, " << violations << " violations"
    << bad.str() << ", inconclusive fraction " << fraction;
  out.detail = s.str();
  return out;
}

Outcome criterion5(const std::vector<Instance>& instances) {
  Outcome out;
  std::size_t compared = 0, disagreements = 0, unresolved = 0;
  std::ostringstream bad;
  auto compare = [&](const char* what, std::size_t i, const std::function<OracleOutcome()>& oracle,
                     const Verdict& engine) {
    OracleOutcome o;
    try {
      o = oracle();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::budget_exceeded) throw;
    }
    if (!o.status() || !concluded(engine)) {
      ++unresolved;
      return;
    }
    ++compared;
    if (*o.status() != engine.status) {
      ++disagreements;
      bad << " [" << what << " #" << i << "]";
    }
  };
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& [a, b, c, aut] = instances[i];
    compare("observability", i, [&] { return oracle_observability(a, c, aut, 12); }, decide_observability(a, c, aut));
    Verdict reach = decide_reachability(a, b, aut);
    emit(reach, a, b, aut);
    compare("reachability", i, [&] { return oracle_reachability(a, b, aut, 12); }, reach);
  }
  Random rnd(77);
  for (int i = 0; i < 30; ++i) {
    std::size_t n = static_cast<std::size_t>(rnd.integer(1, 2));
    std::vector<std::size_t> d{0};
    if (rnd.coin()) d.push_back(static_cast<std::size_t>(rnd.integer(1, 2)));
    DelaySystem sys{rnd.matrix(n, n), rnd.matrix(n, 1), d};
    Verdict v = decide_delay_controllability(sys);
    compare("delay", static_cast<std::size_t>(i), [&] { return oracle_delay_controllability(sys, 10); }, v);
  }
  out.pass = disagreements == 0;
  std::ostringstream s;
  s << compared << " concluded comparisons, " << disagreements << " disagreements" << bad.str() << ", " << unresolved
    << " unresolved";
  out.detail = s.str();
  return out;
}

Outcome criterion6() {
  Outcome out;
  SkolemBound unimodular = compute_skolem_bound(RatMatrix{{2, 1}, {1, 1}});
  SkolemBound diag = compute_skolem_bound(RatMatrix{{Rational(1, 2), 0}, {0, Rational(1, 3)}});
  out.pass = unimodular.prime == 2 && unimodular.period == 16 && diag.prime == 5 && diag.period == 625;
  out.detail = "det 1: r=" + unimodular.prime.get_str() + " P=" + unimodular.period.get_str() +
               "; diag(1/2,1/3): r=" + diag.prime.get_str() + " P=" + diag.period.get_str();
  return out;
}

Outcome criterion7() {
  Outcome out;
  Random rnd(7);
  std::size_t link_failures = 0;
  for (int i = 0; i < 100; ++i) {
    std::size_t n = static_cast<std::size_t>(rnd.integer(1, 3));
    std::vector<std::size_t> d;
    std::size_t size = static_cast<std::size_t>(rnd.integer(1, 3));
    while (d.size() < size) {
      std::size_t x = static_cast<std::size_t>(rnd.integer(0, 3));
      if (std::find(d.begin(), d.end(), x) == d.end()) d.push_back(x);
    }
    std::sort(d.begin(), d.end());
    DelaySystem sys{rnd.matrix(n, n), rnd.matrix(n, static_cast<std::size_t>(rnd.integer(1, 2))), d};
    std::size_t t = static_cast<std::size_t>(rnd.integer(1, 6));
    DelaySignal signal;
    for (std::size_t k = 0; k < t; ++k) signal.push_back(d[static_cast<std::size_t>(rnd.integer(0, static_cast<int>(size) - 1))]);
    if (!verify_image_link(sys, signal, t)) ++link_failures;
  }
  std::size_t agree = 0, differ = 0, indeterminate = 0;
  for (int i = 0; i < 50; ++i) {
    std::size_t n = static_cast<std::size_t>(rnd.integer(1, 3));
    auto r = verify_maxdrop_delay_equivalence(rnd.matrix(n, n), rnd.matrix(n, 1), static_cast<std::size_t>(rnd.integer(0, 2)));
    if (!r)
      ++indeterminate;
    else if (*r)
      ++agree;
    else
      ++differ;
  }
  out.pass = link_failures == 0 && differ == 0 && indeterminate < 5;
  std::ostringstream s;
  s << "image link failures " << link_failures << "/100; equivalence true " << agree << ", false " << differ
    << ", indeterminate " << indeterminate << "/50";
  out.detail = s.str();
  return out;
}

Outcome criterion8() {
  Outcome out;
  Automaton target = three_cycle_110();
  std::size_t equal = 0;
  for (unsigned mask = 1; mask < 16; ++mask) {
    std::vector<std::size_t> d;
    for (std::size_t i = 0; i < 4; ++i)
      if (mask >> i & 1) d.push_back(i);
    if (language_equal_up_to(de_bruijn_automaton(d).automaton, target, 12)) ++equal;
  }
  out.pass = equal == 0;
  out.detail = std::to_string(15 - equal) + "/15 delay sets language-distinct";
  return out;
}

void write_json(const std::filesystem::path& p, const Json& j) { std::ofstream(p) << j.dump(); }

Outcome criterion9(const std::string& dropctl) {
  Outcome out;
  std::size_t accepted = 0, rejected = 0;
  std::ostringstream bad;
  for (std::size_t i = 0; i < emitted.size(); ++i) {
    const Emitted& e = emitted[i];
    Verdict back = verdict_from_json(Json::parse(verdict_to_json(e.verdict).dump()));
    CheckResult r = verify_verdict(back, e.a, e.companion, e.automaton);
    if (r.ok) {
      ++accepted;
    } else {
      ++rejected;
      if (rejected <= 5) bad << " [" << e.verdict.property << ": " << r.reason << "]";
    }
  }
  std::size_t cli_runs = 0, cli_rejected = 0;
  if (!dropctl.empty()) {
    auto dir = std::filesystem::temp_directory_path() / ("dropctl_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    // The binary path is exercised on the regressions plus a stride of the corpus.
    for (std::size_t i = 0; i < emitted.size(); i += (i < 6 ? 1 : 37)) {
      const Emitted& e = emitted[i];
      Json system{{"A", matrix_to_json(e.a)}};
      system[is_output_property(e.verdict.property) ? "C" : "B"] = matrix_to_json(e.companion);
      write_json(dir / "system.json", system);
      write_json(dir / "automaton.json", automaton_to_json(e.automaton));
      write_json(dir / "verdict.json", verdict_to_json(e.verdict));
      std::string cmd = "\"" + dropctl + "\" verify-certificate --system \"" + (dir / "system.json").string() +
                        "\" --automaton \"" + (dir / "automaton.json").string() + "\" --certificate \"" +
                        (dir / "verdict.json").string() + "\" > /dev/null 2>&1";
      ++cli_runs;
      if (std::system(cmd.c_str()) != 0) {
        ++cli_rejected;
        if (cli_rejected <= 5) bad << " [cli #" << i << " " << e.verdict.property << "]";
      }
    }
    std::filesystem::remove_all(dir);
  }
  out.pass = rejected == 0 && cli_rejected == 0;
  std::ostringstream s;
  s << accepted << "/" << emitted.size() << " accepted in process";
  if (!dropctl.empty()) s << ", " << (cli_runs - cli_rejected) << "/" << cli_runs << " accepted by the binary";
  s << bad.str();
  out.detail = s.str();
  return out;
}

Outcome criterion10() {
  Outcome out;
  Random rnd(10);
  std::size_t mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    std::size_t n = static_cast<std::size_t>(rnd.integer(1, 3));
    RatMatrix a = rnd.invertible(n);
    RatMatrix c = rnd.matrix(static_cast<std::size_t>(rnd.integer(1, 2)), n);
    std::size_t s = static_cast<std::size_t>(rnd.integer(1, 3));
    Labels period(s);
    for (auto& l : period) l = rnd.coin() ? 1 : 0;
    std::size_t r0 = rank(observability_matrix(a, c, unroll({}, period, n)));
    std::size_t r1 = rank(observability_matrix(a, c, unroll({}, period, n + 1)));
    std::size_t r2 = rank(observability_matrix(a, c, unroll({}, period, n + 2)));
    if (r0 != r1 || r1 != r2) ++mismatches;
  }
  out.pass = mismatches == 0;
  out.detail = std::to_string(100 - mismatches) + "/100 samples stable at ns, ns+s, ns+2s";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dropctl acceptance run"};
  std::string dropctl;
  app.add_option("--dropctl", dropctl, "dropctl binary for the verify-certificate round trip");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  auto run = [&](int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double t = seconds_since(start);
    if (limit_s > 0 && t > limit_s) {
      o.pass = false;
      o.detail += " (over time limit)";
    }
    all &= o.pass;
    std::printf("%s criterion %d: %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), t);
    std::fflush(stdout);
  };

  const auto instances = corpus();
  run(1, "3x3 output regression", 1, criterion1);
  run(2, "swap system regression", 1, criterion2);
  run(3, "duality breakdown", 1, criterion3);
  run(4, "relation suite", 60, [&] { return criterion4(instances); });
  run(5, "oracle agreement", 120, [&] { return criterion5(instances); });
  run(6, "period bound", 1, criterion6);
  run(7, "delay pipeline", 120, criterion7);
  run(8, "three-cycle inexpressibility", 30, criterion8);
  run(9, "certificate re-verification", 0, [&] { return criterion9(dropctl); });
  run(10, "periodic rank stabilization", 30, criterion10);
  return all ? 0 : 1;
}
