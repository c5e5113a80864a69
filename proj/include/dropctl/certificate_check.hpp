#pragma once

#include <string>

#include "dropctl/automaton.hpp"
#include "dropctl/delays.hpp"
#include "dropctl/verdict.hpp"

namespace dropctl {

struct CheckResult {
  bool ok = true;
  std::string reason;
};

/// Re-derives the reduced sub-problems of `v.property` from the original data
/// and re-checks every leaf certificate exactly. `companion` is C for the
/// output properties and B for the input ones.
CheckResult verify_verdict(const Verdict& v, const RatMatrix& a, const RatMatrix& companion,
                           const Automaton& automaton, double margin = kDefaultSchurMargin);

CheckResult verify_delay_verdict(const Verdict& v, const DelaySystem& sys, double margin = kDefaultSchurMargin);

/// Leaf checks on a stated subject, exposed for tests.
CheckResult check_observability_certificate(const Verdict& leaf, const RatMatrix& a, const RatMatrix& c,
                                            const Automaton& automaton);
CheckResult check_nilpotent_certificate(const Verdict& leaf, const RatMatrix& a, const RatMatrix& b,
                                        const Automaton& automaton);

bool is_output_property(const std::string& property);
bool is_input_property(const std::string& property);

}  // namespace dropctl
