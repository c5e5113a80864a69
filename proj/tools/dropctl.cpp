// dropctl: decide observability/controllability-type properties of linear
// systems whose measurements or inputs are dropped as an automaton allows.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "dropctl/certificate_check.hpp"
#include "dropctl/delays.hpp"
#include "dropctl/error.hpp"
#include "dropctl/io.hpp"
#include "dropctl/properties.hpp"

using namespace dropctl;

namespace {

const std::vector<std::string> kProperties = {
    "observability",        "constructibility", "controllability", "reachability",
    "zero-controllability", "detectability",    "stabilizability", "delay-controllability"};

struct AnalyzeArgs {
  std::string property;
  std::string system;
  std::string automaton;
  std::size_t max_depth = 0;
  std::string arithmetic = "exact";
  double tolerance = 1e-9;
  double margin = kDefaultSchurMargin;
  std::string format = "text";
  unsigned jobs = 1;
};

struct VerifyArgs {
  std::string system;
  std::string automaton;
  std::string certificate;
  double margin = kDefaultSchurMargin;
  std::string arithmetic = "exact";
  double tolerance = 1e-9;
};

ParseOptions parse_options(const std::string& arithmetic, double tolerance) {
  ParseOptions p;
  if (arithmetic == "float") {
    if (!(tolerance > 0)) fail(ErrorKind::invalid_params, "--tolerance must be positive");
    p.floats.tolerance = tolerance;
  } else if (arithmetic != "exact") {
    fail(ErrorKind::invalid_params, "--arithmetic must be exact or float");
  }
  return p;
}

Automaton pick_automaton(const std::string& spec, const SystemFile& sys) {
  if (!spec.empty()) return automaton_from_spec(spec);
  if (sys.automaton) return *sys.automaton;
  fail(ErrorKind::invalid_params, "no automaton: pass --automaton or embed one in the system file");
}

const RatMatrix& need(const std::optional<RatMatrix>& m, const char* name, const std::string& property) {
  if (!m) fail(ErrorKind::invalid_params, property + " needs \"" + name + "\" in the system file");
  return *m;
}

std::string describe(const Word& w) {
  std::ostringstream out;
  out << labels_to_string(w.labels) << " via nodes";
  for (NodeId v : w.path) out << ' ' << v;
  return out.str();
}

void print_verdict(std::ostream& out, const Verdict& v, const std::string& indent) {
  out << indent << v.property << ": " << to_string(v.status) << (v.exact ? "" : " (non-exact reduction)") << '\n';
  if (!v.reduction_trace.empty()) {
    out << indent << "  trace:";
    for (const auto& s : v.reduction_trace) out << ' ' << s;
    out << '\n';
  }
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, HorizonCert>) {
          out << indent << "  horizon T = " << c.horizon << '\n';
        } else if constexpr (std::is_same_v<T, CycleCert>) {
          if (!c.prefix.labels.empty()) out << indent << "  prefix " << describe(c.prefix) << '\n';
          out << indent << "  cycle " << describe(c.cycle) << '\n';
          out << indent << "  witness (";
          for (std::size_t i = 0; i < c.witness.size(); ++i) out << (i ? ", " : "") << to_string(c.witness[i]);
          out << ")\n";
        } else if constexpr (std::is_same_v<T, LassoCert>) {
          if (!c.prefix.labels.empty()) out << indent << "  prefix " << describe(c.prefix) << '\n';
          out << indent << "  cycle " << describe(c.cycle) << '\n';
        } else if constexpr (std::is_same_v<T, DepthCert>) {
          out << indent << "  no decision up to depth " << c.max_depth_reached << '\n';
          if (c.theoretical_bound)
            out << indent << "  cycle-length bound P*N = " << c.theoretical_bound->get_str()
                << (c.bound_for_rationalized_input ? " (for the rationalized data)" : "") << '\n';
        } else if constexpr (std::is_same_v<T, TrivialCert>) {
          out << indent << "  " << c.reason << '\n';
        } else {
          for (const Verdict& p : c.parts) print_verdict(out, p, indent + "  ");
        }
      },
      v.certificate);
  if (v.delay_witness) {
    auto list = [](const std::vector<std::size_t>& d) {
      std::string s = "(";
      for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
      return s + ")";
    };
    out << indent << "  delay signal " << list(v.delay_witness->prefix) << " then " << list(v.delay_witness->cycle)
        << " repeated (actuation lags by " << v.delay_witness->shift << ")\n";
  }
  for (const auto& w : v.warnings) out << indent << "  warning: " << w << '\n';
}

int status_code(Status s) { return s == Status::holds ? 0 : s == Status::fails ? 1 : 2; }

int run_analyze(const AnalyzeArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  if (std::find(kProperties.begin(), kProperties.end(), args.property) == kProperties.end())
    fail(ErrorKind::invalid_params, "unknown property '" + args.property + "'");
  if (args.format != "text" && args.format != "json") fail(ErrorKind::invalid_params, "--format must be text or json");

  SystemFile sys = parse_system(read_json_file(args.system), parse_options(args.arithmetic, args.tolerance));
  std::vector<std::string> notes;
  if (sys.had_floats)
    notes.push_back(args.arithmetic == "float" ? "float entries rationalized within the tolerance"
                                               : "float entries rationalized verbatim");

  PropertyOptions options;
  options.decision.max_depth = args.max_depth;
  options.decision.jobs = std::max(1u, args.jobs);
  options.decision.rationalized_input = sys.had_floats;
  options.margin = args.margin;

  Verdict v;
  Json extra = Json::object();
  const std::string& p = args.property;
  if (p == "delay-controllability") {
    if (!sys.delays) fail(ErrorKind::invalid_params, "delay-controllability needs \"D\" in the system file");
    DelaySystem ds{sys.a, need(sys.b, "B", p), *sys.delays};
    ds.normalize();
    extra["automaton"] = automaton_to_json(de_bruijn_automaton(ds.delays).automaton);
    v = decide_delay_controllability(ds, options);
  } else {
    Automaton aut = pick_automaton(args.automaton, sys);
    if (p == "observability") {
      v = decide_observability(sys.a, need(sys.c, "C", p), aut, options.decision);
    } else if (p == "constructibility") {
      v = decide_constructibility(sys.a, need(sys.c, "C", p), aut, options);
    } else if (p == "detectability") {
      v = decide_detectability(sys.a, need(sys.c, "C", p), aut, options);
    } else if (p == "controllability") {
      v = decide_controllability(sys.a, need(sys.b, "B", p), aut, options);
    } else if (p == "reachability") {
      v = decide_reachability(sys.a, need(sys.b, "B", p), aut, options);
    } else if (p == "zero-controllability") {
      v = decide_zero_controllability(sys.a, need(sys.b, "B", p), aut, options);
    } else {
      v = decide_stabilizability(sys.a, need(sys.b, "B", p), aut, options);
    }
  }
  v.warnings.insert(v.warnings.begin(), notes.begin(), notes.end());

  std::optional<SkolemBound> bound;
  if (sys.a.rows() > 0 && sgn(determinant(sys.a)) != 0) bound = compute_skolem_bound(sys.a);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (args.format == "json") {
    Json report{{"verdict", verdict_to_json(v)}, {"wall_time_ms", ms}};
    if (bound)
      report["skolem_bound"] = Json{{"denominator_lcm", bound->denominator_lcm.get_str()},
                                    {"prime", bound->prime.get_str()},
                                    {"period", bound->period.get_str()}};
    report.update(extra);
    std::cout << report.dump(2) << '\n';
  } else {
    print_verdict(std::cout, v, "");
    if (bound)
      std::cout << "period bound (informational): r = " << bound->prime.get_str()
                << ", P <= " << bound->period.get_str() << '\n';
    std::cout << "wall time: " << ms << " ms\n";
  }
  return status_code(v.status);
}

int run_build(const std::string& spec, const std::string& output) {
  Json j = automaton_to_json(automaton_from_spec(spec));
  if (output.empty()) {
    std::cout << j.dump() << '\n';
  } else {
    std::ofstream out(output);
    if (!out) fail(ErrorKind::invalid_params, "cannot write " + output);
    out << j.dump() << '\n';
  }
  return 0;
}

int run_verify(const VerifyArgs& args) {
  SystemFile sys = parse_system(read_json_file(args.system), parse_options(args.arithmetic, args.tolerance));
  Json doc = read_json_file(args.certificate);
  Verdict v = verdict_from_json(doc.contains("verdict") ? doc.at("verdict") : doc);
  CheckResult r;
  if (v.property == "delay-controllability") {
    if (!sys.delays) fail(ErrorKind::invalid_params, "delay verdicts need \"D\" in the system file");
    r = verify_delay_verdict(v, DelaySystem{sys.a, need(sys.b, "B", v.property), *sys.delays}, args.margin);
  } else {
    Automaton aut = pick_automaton(args.automaton, sys);
    const bool output = is_output_property(v.property);
    const RatMatrix& m = output ? need(sys.c, "C", v.property) : need(sys.b, "B", v.property);
    r = verify_verdict(v, sys.a, m, aut, args.margin);
  }
  if (r.ok) {
    std::cout << "accepted: " << v.property << ' ' << to_string(v.status) << '\n';
    return 0;
  }
  std::cout << "rejected: " << r.reason << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide dropout-constrained observability and controllability properties"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Decide one property of a system");
  an->add_option("property", analyze.property, "observability, constructibility, controllability, reachability, "
                                               "zero-controllability, detectability, stabilizability or "
                                               "delay-controllability")
      ->required();
  an->add_option("--system", analyze.system, "System JSON file")->required();
  an->add_option("--automaton", analyze.automaton, "maxdrop:l, mk:m,k, debruijn:d0,d1,... or a JSON file");
  an->add_option("--max-depth", analyze.max_depth, "Search depth (default 3*n*N)");
  an->add_option("--arithmetic", analyze.arithmetic, "exact or float")->capture_default_str();
  an->add_option("--tolerance", analyze.tolerance, "Rationalization tolerance in float mode")->capture_default_str();
  an->add_option("--margin", analyze.margin, "Unit-circle margin for the unstable split")->capture_default_str();
  an->add_option("--format", analyze.format, "text or json")->capture_default_str();
  an->add_option("--jobs", analyze.jobs, "Worker threads")->capture_default_str();

  std::string spec, output;
  auto* build = app.add_subcommand("build-automaton", "Print an automaton as JSON");
  build->add_option("spec", spec, "maxdrop:l, mk:m,k, debruijn:d0,d1,... or a JSON file")->required();
  build->add_option("-o,--output", output, "Write to a file instead of stdout");

  VerifyArgs verify;
  auto* ver = app.add_subcommand("verify-certificate", "Re-check an emitted verdict");
  ver->add_option("--system", verify.system, "System JSON file")->required();
  ver->add_option("--automaton", verify.automaton, "Automaton the verdict was computed for");
  ver->add_option("--certificate", verify.certificate, "Verdict or report JSON")->required();
  ver->add_option("--margin", verify.margin, "Unit-circle margin used by the analysis")->capture_default_str();
  ver->add_option("--arithmetic", verify.arithmetic, "exact or float")->capture_default_str();
  ver->add_option("--tolerance", verify.tolerance, "Rationalization tolerance in float mode")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "error: InvalidParams: " << e.what() << '\n';
    return exit_code(ErrorKind::invalid_params);
  }

  try {
    if (*an) return run_analyze(analyze);
    if (*build) return run_build(spec, output);
    return run_verify(verify);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: InternalError: " << e.what() << '\n';
    return exit_code(ErrorKind::internal);
  }
}
