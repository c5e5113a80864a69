#pragma once

#include <stdexcept>
#include <string>

namespace dropctl {

/// Error categories. Each maps to a distinct CLI exit code (see exit_code()).
enum class ErrorKind {
  parse,
  shape_mismatch,
  empty_automaton,
  invalid_params,
  numerical_failure,
  singular_matrix,
  budget_exceeded,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "ParseError";
    case ErrorKind::shape_mismatch: return "ShapeMismatch";
    case ErrorKind::empty_automaton: return "EmptyAutomaton";
    case ErrorKind::invalid_params: return "InvalidParams";
    case ErrorKind::numerical_failure: return "NumericalFailure";
    case ErrorKind::singular_matrix: return "SingularMatrix";
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::internal: return "InternalError";
  }
  return "InternalError";
}

/// Exit codes 0..2 are reserved for holds/fails/inconclusive.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return 3;
    case ErrorKind::shape_mismatch: return 4;
    case ErrorKind::empty_automaton: return 5;
    case ErrorKind::invalid_params: return 6;
    case ErrorKind::numerical_failure: return 7;
    case ErrorKind::singular_matrix: return 8;
    case ErrorKind::budget_exceeded: return 9;
    case ErrorKind::internal: return 10;
  }
  return 10;
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace dropctl
