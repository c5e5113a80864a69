#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dropctl/automaton.hpp"
#include "dropctl/delays.hpp"
#include "dropctl/spectral.hpp"
#include "dropctl/verdict.hpp"

namespace dropctl {

using Json = nlohmann::json;

/// How a flat (non-nested) JSON array is shaped.
enum class VectorShape { reject, row, column };

struct ParseOptions {
  /// Applied to JSON floating-point numbers only; integers, "p/q" and
  /// decimal strings are always exact.
  Rationalization floats;
};

struct MatrixParse {
  RatMatrix matrix;
  bool had_floats = false;
};

Rational parse_entry(const Json& j, const ParseOptions& options, bool* had_float = nullptr);
MatrixParse parse_matrix(const Json& j, VectorShape flat, const ParseOptions& options = {});
Json matrix_to_json(const RatMatrix& m);
Json vector_to_json(const std::vector<Rational>& v);
std::vector<Rational> vector_from_json(const Json& j);

/// {"A": ..., "B": ...} and/or "C", optionally "D" for delay systems.
struct SystemFile {
  RatMatrix a;
  std::optional<RatMatrix> b;
  std::optional<RatMatrix> c;
  std::optional<std::vector<std::size_t>> delays;
  std::optional<Automaton> automaton;  // embedded "automaton" object, if any
  bool had_floats = false;
};

SystemFile parse_system(const Json& j, const ParseOptions& options = {});

Automaton parse_automaton(const Json& j);
Json automaton_to_json(const Automaton& a);

/// `maxdrop:l`, `mk:m,k`, `debruijn:d0,d1,...`, or a path to an automaton
/// JSON file.
Automaton automaton_from_spec(const std::string& spec);

Json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const Json& j);

Json read_json_file(const std::string& path);

}  // namespace dropctl
