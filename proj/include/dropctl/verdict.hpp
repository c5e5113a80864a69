#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dropctl/automaton.hpp"
#include "dropctl/linalg.hpp"

namespace dropctl {

enum class Status { holds, fails, inconclusive };

const char* to_string(Status status);

/// Every admissible word of length `horizon` certifies the property (full
/// rank observability matrix, or for windowed reachability: full rank at
/// some prefix length <= horizon).
struct HorizonCert {
  std::size_t horizon = 0;
};

/// A periodic (possibly lasso-shaped) admissible signal prefix . cycle^w
/// together with a nonzero initial state producing zero output along it.
struct CycleCert {
  Word prefix;
  CycleWord cycle;
  std::vector<Rational> witness;
};

/// An admissible lasso prefix . cycle^w along which the reachability matrix
/// of a nilpotent system never reaches full rank.
struct LassoCert {
  Word prefix;
  CycleWord cycle;
};

struct DepthCert {
  std::size_t max_depth_reached = 0;
  /// P * N with P = r^(n^2); absent when A is singular.
  std::optional<BigInt> theoretical_bound;
  std::optional<BigInt> period_bound;
  bool bound_for_rationalized_input = false;
};

/// Property settled by the reduction alone (e.g. empty regular part).
struct TrivialCert {
  std::string reason;
};

struct Verdict;

/// Property decided by several sub-problems; each part carries its own
/// verdict and certificate.
struct CompositeCert {
  std::vector<Verdict> parts;
};

using Certificate = std::variant<HorizonCert, CycleCert, LassoCert, DepthCert, TrivialCert, CompositeCert>;

/// The reduced problem a leaf certificate talks about.
struct Subject {
  enum class Kind { observability, nilpotent_reachability };
  Kind kind = Kind::observability;
  RatMatrix a;
  RatMatrix companion;  // C for observability, B for nilpotent reachability
  bool reversed_automaton = false;
};

/// Delay-signal translation of a delay-controllability Fails verdict: the
/// periodic delay signal prefix . cycle^w with never-full-rank controllability
/// matrix. `shift` is the offset between actuation and dropout signals.
struct DelayWitness {
  std::vector<std::size_t> prefix;
  std::vector<std::size_t> cycle;
  std::size_t shift = 0;
};

struct Verdict {
  std::string property;
  Status status = Status::inconclusive;
  Certificate certificate = TrivialCert{};
  std::vector<std::string> reduction_trace;
  std::vector<std::string> warnings;
  std::optional<Subject> subject;
  /// False when a float reduction produced the subject.
  bool exact = true;
  std::optional<DelayWitness> delay_witness;
};

}  // namespace dropctl
