#include "dropctl/io.hpp"

#include <fstream>
#include <sstream>

#include "dropctl/error.hpp"

namespace dropctl {

namespace {

std::size_t parse_count(const std::string& text, const std::string& what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    fail(ErrorKind::invalid_params, "bad " + what + ": '" + text + "'");
  return std::stoul(text);
}

std::vector<std::size_t> parse_count_list(const std::string& text, const std::string& what) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_count(item, what));
  if (out.empty()) fail(ErrorKind::invalid_params, "empty " + what);
  return out;
}

Json word_to_json(const Word& w) {
  return Json{{"labels", Json(std::vector<int>(w.labels.begin(), w.labels.end()))}, {"path", w.path}};
}

Labels labels_from_json(const Json& j) {
  Labels out;
  for (const Json& x : j) {
    if (!x.is_number_integer() || (x.get<int>() != 0 && x.get<int>() != 1))
      fail(ErrorKind::parse, "labels must be 0/1 integers");
    out.push_back(static_cast<Label>(x.get<int>()));
  }
  return out;
}

template <class W>
W word_from_json(const Json& j) {
  W w;
  w.labels = labels_from_json(j.at("labels"));
  w.path = j.at("path").get<std::vector<NodeId>>();
  if (w.path.size() != w.labels.size()) fail(ErrorKind::parse, "word path and labels differ in length");
  return w;
}

std::string big_to_string(const BigInt& x) { return x.get_str(); }

Json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const Json& j);

}  // namespace

Rational parse_entry(const Json& j, const ParseOptions& options, bool* had_float) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Rational(BigInt(std::to_string(j.get<std::uint64_t>())));
    return Rational(BigInt(std::to_string(j.get<std::int64_t>())));
  }
  if (j.is_number_float()) {
    if (had_float) *had_float = true;
    return rationalize(j.get<double>(), options.floats);
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  fail(ErrorKind::parse, "matrix entry must be a number or a string, got " + j.dump());
}

MatrixParse parse_matrix(const Json& j, VectorShape flat, const ParseOptions& options) {
  if (!j.is_array()) fail(ErrorKind::parse, "matrix must be a JSON array");
  MatrixParse out;
  bool nested = !j.empty() && j.front().is_array();
  if (!nested) {
    if (j.empty()) return out;
    if (flat == VectorShape::reject) fail(ErrorKind::parse, "expected a nested array for a matrix");
    std::vector<Rational> entries;
    for (const Json& x : j) entries.push_back(parse_entry(x, options, &out.had_floats));
    out.matrix = flat == VectorShape::row ? RatMatrix::row(entries) : RatMatrix::column(entries);
    return out;
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  out.matrix = RatMatrix(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail(ErrorKind::shape_mismatch, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) out.matrix(r, c) = parse_entry(j[r][c], options, &out.had_floats);
  }
  return out;
}

Json matrix_to_json(const RatMatrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const Rational& x = m(r, c);
      if (x.get_den() == 1 && x.get_num().fits_slong_p())
        row.push_back(x.get_num().get_si());
      else
        row.push_back(to_string(x));
    }
    out.push_back(std::move(row));
  }
  return out;
}

Json vector_to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const Rational& x : v) out.push_back(to_string(x));
  return out;
}

std::vector<Rational> vector_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorKind::parse, "vector must be a JSON array");
  std::vector<Rational> out;
  for (const Json& x : j) out.push_back(parse_entry(x, {}));
  return out;
}

SystemFile parse_system(const Json& j, const ParseOptions& options) {
  if (!j.is_object()) fail(ErrorKind::parse, "system file must be a JSON object");
  if (!j.contains("A")) fail(ErrorKind::parse, "system file lacks \"A\"");
  SystemFile sys;
  auto a = parse_matrix(j.at("A"), VectorShape::reject, options);
  sys.a = a.matrix;
  sys.had_floats = a.had_floats;
  if (!sys.a.square()) fail(ErrorKind::shape_mismatch, "A must be square");
  if (j.contains("B")) {
    auto b = parse_matrix(j.at("B"), VectorShape::column, options);
    sys.b = b.matrix;
    sys.had_floats = sys.had_floats || b.had_floats;
    if (sys.b->rows() != sys.a.rows()) fail(ErrorKind::shape_mismatch, "B must have as many rows as A");
  }
  if (j.contains("C")) {
    auto c = parse_matrix(j.at("C"), VectorShape::row, options);
    sys.c = c.matrix;
    sys.had_floats = sys.had_floats || c.had_floats;
    if (sys.c->cols() != sys.a.rows()) fail(ErrorKind::shape_mismatch, "C must have as many columns as A");
  }
  if (j.contains("D")) {
    const Json& d = j.at("D");
    if (!d.is_array() || d.empty()) fail(ErrorKind::parse, "\"D\" must be a non-empty array");
    std::vector<std::size_t> delays;
    for (const Json& x : d) {
      if (!x.is_number_integer() || x.get<long long>() < 0) fail(ErrorKind::parse, "delays must be non-negative integers");
      delays.push_back(x.get<std::size_t>());
    }
    sys.delays = std::move(delays);
  }
  if (j.contains("automaton")) sys.automaton = parse_automaton(j.at("automaton"));
  return sys;
}

Automaton parse_automaton(const Json& j) {
  if (!j.is_object() || !j.contains("M") || !j.contains("s"))
    fail(ErrorKind::parse, "automaton must be an object with \"M\" and \"s\"");
  const Json& m = j.at("M");
  const Json& s = j.at("s");
  if (!m.is_array() || !s.is_array()) fail(ErrorKind::parse, "\"M\" and \"s\" must be arrays");
  const std::size_t n = s.size();
  if (m.size() != n) fail(ErrorKind::shape_mismatch, "M must be N x N with N = |s|");
  std::vector<std::vector<bool>> transitions(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    if (!m[i].is_array() || m[i].size() != n) fail(ErrorKind::shape_mismatch, "M must be N x N with N = |s|");
    for (std::size_t k = 0; k < n; ++k) {
      const Json& x = m[i][k];
      if (x.is_boolean())
        transitions[i][k] = x.get<bool>();
      else if (x.is_number_integer() && (x.get<int>() == 0 || x.get<int>() == 1))
        transitions[i][k] = x.get<int>() == 1;
      else
        fail(ErrorKind::parse, "M entries must be 0/1");
    }
  }
  return Automaton(std::move(transitions), labels_from_json(s));
}

Json automaton_to_json(const Automaton& a) {
  Json m = Json::array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < a.size(); ++k) row.push_back(a.edge(i, k) ? 1 : 0);
    m.push_back(std::move(row));
  }
  return Json{{"M", std::move(m)}, {"s", std::vector<int>(a.labels().begin(), a.labels().end())}};
}

Automaton automaton_from_spec(const std::string& spec) {
  auto starts = [&](const char* prefix) { return spec.rfind(prefix, 0) == 0; };
  if (starts("maxdrop:")) return build_max_dropouts(parse_count(spec.substr(8), "maxdrop length"));
  if (starts("mk:")) {
    auto v = parse_count_list(spec.substr(3), "mk parameters");
    if (v.size() != 2) fail(ErrorKind::invalid_params, "mk expects m,k");
    return build_mk_firmness(v[0], v[1]);
  }
  if (starts("debruijn:")) return de_bruijn_automaton(parse_count_list(spec.substr(9), "delay set")).automaton;
  return parse_automaton(read_json_file(spec));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::parse, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse, path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

namespace {

Json certificate_to_json(const Certificate& cert) {
  return std::visit(
      [](const auto& c) -> Json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, HorizonCert>) {
          return Json{{"type", "horizon"}, {"T", c.horizon}};
        } else if constexpr (std::is_same_v<T, CycleCert>) {
          return Json{{"type", "cycle"},
                      {"prefix", word_to_json(c.prefix)},
                      {"cycle", word_to_json(c.cycle)},
                      {"witness", vector_to_json(c.witness)}};
        } else if constexpr (std::is_same_v<T, LassoCert>) {
          return Json{{"type", "lasso"}, {"prefix", word_to_json(c.prefix)}, {"cycle", word_to_json(c.cycle)}};
        } else if constexpr (std::is_same_v<T, DepthCert>) {
          Json j{{"type", "depth"},
                 {"max_depth_reached", c.max_depth_reached},
                 {"bound_for_rationalized_input", c.bound_for_rationalized_input}};
          j["theoretical_bound"] = c.theoretical_bound ? Json(big_to_string(*c.theoretical_bound)) : Json(nullptr);
          j["period_bound"] = c.period_bound ? Json(big_to_string(*c.period_bound)) : Json(nullptr);
          return j;
        } else if constexpr (std::is_same_v<T, TrivialCert>) {
          return Json{{"type", "trivial"}, {"reason", c.reason}};
        } else {
          Json parts = Json::array();
          for (const Verdict& p : c.parts) parts.push_back(verdict_to_json(p));
          return Json{{"type", "composite"}, {"parts", std::move(parts)}};
        }
      },
      cert);
}

std::optional<BigInt> optional_big(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return BigInt(j.at(key).get<std::string>(), 10);
}

Certificate certificate_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "horizon") return HorizonCert{j.at("T").get<std::size_t>()};
  if (type == "cycle") {
    CycleCert c;
    c.prefix = word_from_json<Word>(j.at("prefix"));
    c.cycle = word_from_json<CycleWord>(j.at("cycle"));
    c.witness = vector_from_json(j.at("witness"));
    return c;
  }
  if (type == "lasso") {
    LassoCert c;
    c.prefix = word_from_json<Word>(j.at("prefix"));
    c.cycle = word_from_json<CycleWord>(j.at("cycle"));
    return c;
  }
  if (type == "depth") {
    DepthCert c;
    c.max_depth_reached = j.at("max_depth_reached").get<std::size_t>();
    c.theoretical_bound = optional_big(j, "theoretical_bound");
    c.period_bound = optional_big(j, "period_bound");
    c.bound_for_rationalized_input = j.value("bound_for_rationalized_input", false);
    return c;
  }
  if (type == "trivial") return TrivialCert{j.at("reason").get<std::string>()};
  if (type == "composite") {
    CompositeCert c;
    for (const Json& p : j.at("parts")) c.parts.push_back(verdict_from_json(p));
    return c;
  }
  fail(ErrorKind::parse, "unknown certificate type '" + type + "'");
}

Status status_from_string(const std::string& s) {
  if (s == "holds") return Status::holds;
  if (s == "fails") return Status::fails;
  if (s == "inconclusive") return Status::inconclusive;
  fail(ErrorKind::parse, "unknown status '" + s + "'");
}

}  // namespace

Json verdict_to_json(const Verdict& v) {
  Json j{{"property", v.property},
         {"status", to_string(v.status)},
         {"certificate", certificate_to_json(v.certificate)},
         {"reduction_trace", v.reduction_trace},
         {"warnings", v.warnings},
         {"exact", v.exact}};
  if (v.subject) {
    j["subject"] = Json{{"kind", v.subject->kind == Subject::Kind::observability ? "observability" : "nilpotent-reachability"},
                        {"A", matrix_to_json(v.subject->a)},
                        {"companion", matrix_to_json(v.subject->companion)},
                        {"companion_shape", {v.subject->companion.rows(), v.subject->companion.cols()}},
                        {"reversed_automaton", v.subject->reversed_automaton}};
  }
  if (v.delay_witness) {
    j["delay_witness"] = Json{{"prefix", v.delay_witness->prefix},
                              {"cycle", v.delay_witness->cycle},
                              {"shift", v.delay_witness->shift}};
  }
  return j;
}

Verdict verdict_from_json(const Json& j) {
  try {
    Verdict v;
    v.property = j.at("property").get<std::string>();
    v.status = status_from_string(j.at("status").get<std::string>());
    v.certificate = certificate_from_json(j.at("certificate"));
    v.reduction_trace = j.value("reduction_trace", std::vector<std::string>{});
    v.warnings = j.value("warnings", std::vector<std::string>{});
    v.exact = j.value("exact", true);
    if (j.contains("subject")) {
      const Json& s = j.at("subject");
      Subject sub;
      const std::string kind = s.at("kind").get<std::string>();
      if (kind == "observability")
        sub.kind = Subject::Kind::observability;
      else if (kind == "nilpotent-reachability")
        sub.kind = Subject::Kind::nilpotent_reachability;
      else
        fail(ErrorKind::parse, "unknown subject kind '" + kind + "'");
      sub.a = parse_matrix(s.at("A"), VectorShape::reject).matrix;
      sub.companion = parse_matrix(s.at("companion"), VectorShape::reject).matrix;
      if (s.contains("companion_shape")) {
        auto shape = s.at("companion_shape").get<std::vector<std::size_t>>();
        if (shape.size() == 2 && sub.companion.empty()) sub.companion = RatMatrix(shape[0], shape[1]);
      }
      sub.reversed_automaton = s.value("reversed_automaton", false);
      v.subject = std::move(sub);
    }
    if (j.contains("delay_witness")) {
      const Json& w = j.at("delay_witness");
      v.delay_witness = DelayWitness{w.at("prefix").get<std::vector<std::size_t>>(),
                                     w.at("cycle").get<std::vector<std::size_t>>(), w.at("shift").get<std::size_t>()};
    }
    return v;
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse, std::string("malformed verdict: ") + e.what());
  }
}

}  // namespace dropctl
