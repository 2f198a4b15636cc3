#include "lshaped/native_format.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lshaped {

namespace {

using nlohmann::json;

class Reader {
 public:
  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw ParseError({{"native", 1, path + ": " + message}});
  }

  const json& field(const json& obj, const std::string& key, const std::string& path) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing");
    return *it;
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "expected a finite number");
    return d;
  }

  std::size_t index(const json& v, const std::string& path) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      fail(path, "expected a nonnegative integer");
    return v.get<std::size_t>();
  }

  std::vector<double> vector(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

  // Array of rows; `cols` fixes the width when there are no rows.
  Matrix matrix(const json& v, const std::string& path, std::size_t cols) const {
    if (!v.is_array()) fail(path, "expected an array of rows");
    Matrix m(v.size(), cols);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string rp = path + "[" + std::to_string(i) + "]";
      const std::vector<double> row = vector(v[i], rp);
      if (row.size() != cols)
        fail(rp, "has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = row[j];
    }
    return m;
  }
};

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

json header(const std::string& name, const FirstStage& first, const Matrix& W) {
  json doc;
  doc["version"] = kNativeFormatVersion;
  doc["name"] = name;
  doc["first_stage"] = {{"c", first.c}, {"A", matrix_json(first.A)}, {"b", first.b}};
  doc["recourse"] = {{"W", matrix_json(W)}, {"m", W.cols()}};
  return doc;
}

}  // namespace

NativeDocument parse_native(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw ParseError({{"native", line, std::string("malformed JSON: ") + e.what()}});
  }
  const Reader r;
  if (!doc.is_object()) r.fail("$", "expected an object");
  const json& version = r.field(doc, "version", "$");
  if (!version.is_number_integer() || version.get<long long>() != kNativeFormatVersion)
    r.fail("$.version", "unsupported version (expected " + std::to_string(kNativeFormatVersion) + ")");
  std::string name;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) r.fail("$.name", "expected a string");
    name = it->get<std::string>();
  }

  const json& fs = r.field(doc, "first_stage", "$");
  FirstStage first;
  first.c = r.vector(r.field(fs, "c", "$.first_stage"), "$.first_stage.c");
  first.A = r.matrix(r.field(fs, "A", "$.first_stage"), "$.first_stage.A", first.c.size());
  first.b = r.vector(r.field(fs, "b", "$.first_stage"), "$.first_stage.b");
  if (first.b.size() != first.A.rows())
    r.fail("$.first_stage.b", "has " + std::to_string(first.b.size()) + " entries, expected " +
                                   std::to_string(first.A.rows()));

  const json& rec = r.field(doc, "recourse", "$");
  const std::size_t m = r.index(r.field(rec, "m", "$.recourse"), "$.recourse.m");
  const Matrix W = r.matrix(r.field(rec, "W", "$.recourse"), "$.recourse.W", m);
  const std::size_t n = first.c.size();

  const bool has_scenarios = doc.contains("scenarios");
  const bool has_random = doc.contains("random") || doc.contains("nominal");
  if (has_scenarios && has_random) r.fail("$", "\"scenarios\" and \"random\"/\"nominal\" are mutually exclusive");
  if (!has_scenarios && !has_random) r.fail("$", "expected \"scenarios\" or \"nominal\" with \"random\"");

  auto block = [&](const json& obj, const std::string& path, std::vector<double>& q, Matrix& T,
                   std::vector<double>& h) {
    q = r.vector(r.field(obj, "q", path), path + ".q");
    if (q.size() != m) r.fail(path + ".q", "has " + std::to_string(q.size()) + " entries, expected " + std::to_string(m));
    T = r.matrix(r.field(obj, "T", path), path + ".T", n);
    h = r.vector(r.field(obj, "h", path), path + ".h");
    if (T.rows() != W.rows()) r.fail(path + ".T", "has " + std::to_string(T.rows()) + " rows, expected " + std::to_string(W.rows()));
    if (h.size() != W.rows()) r.fail(path + ".h", "has " + std::to_string(h.size()) + " entries, expected " + std::to_string(W.rows()));
  };

  if (has_scenarios) {
    const json& sc = doc["scenarios"];
    if (!sc.is_array()) r.fail("$.scenarios", "expected an array");
    if (sc.empty()) r.fail("$.scenarios", "N >= 1 required");
    TwoStageProblem p;
    p.name = name;
    p.first = first;
    p.W = W;
    for (std::size_t s = 0; s < sc.size(); ++s) {
      const std::string path = "$.scenarios[" + std::to_string(s) + "]";
      Scenario scen;
      scen.probability = r.number(r.field(sc[s], "pi", path), path + ".pi");
      if (!(scen.probability > 0.0)) r.fail(path + ".pi", "must be positive");
      block(sc[s], path, scen.q, scen.T, scen.h);
      p.scenarios.push_back(std::move(scen));
    }
    if (auto problems = validate_problem(p); !problems.empty()) r.fail("$", problems.front());
    normalize_probabilities(p);
    return p;
  }

  StochasticTemplate t;
  t.name = name;
  t.first = first;
  t.W = W;
  block(r.field(doc, "nominal", "$"), "$.nominal", t.q, t.T, t.h);
  const json& random = r.field(doc, "random", "$");
  if (!random.is_array()) r.fail("$.random", "expected an array");
  for (std::size_t k = 0; k < random.size(); ++k) {
    const std::string path = "$.random[" + std::to_string(k) + "]";
    const json& e = random[k];
    RandomEntry entry;
    const json& target = r.field(e, "target", path);
    const std::string tname = target.is_string() ? target.get<std::string>() : "";
    if (tname == "h") entry.target = RandomTarget::h;
    else if (tname == "q") entry.target = RandomTarget::q;
    else if (tname == "T") entry.target = RandomTarget::T;
    else r.fail(path + ".target", "expected \"h\", \"q\" or \"T\"");
    if (e.contains("row")) entry.row = r.index(e["row"], path + ".row");
    if (e.contains("col")) entry.col = r.index(e["col"], path + ".col");
    const json& outcomes = r.field(e, "outcomes", path);
    if (!outcomes.is_array() || outcomes.empty()) r.fail(path + ".outcomes", "expected a nonempty array");
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const std::string op = path + ".outcomes[" + std::to_string(i) + "]";
      if (!outcomes[i].is_array() || outcomes[i].size() != 2) r.fail(op, "expected [value, probability]");
      entry.outcomes.push_back({r.number(outcomes[i][0], op + "[0]"), r.number(outcomes[i][1], op + "[1]")});
    }
    t.random.push_back(std::move(entry));
  }
  if (auto problems = validate_template(t); !problems.empty()) r.fail("$", problems.front());
  return t;
}

std::string write_native(const TwoStageProblem& problem) {
  json doc = header(problem.name, problem.first, problem.W);
  json sc = json::array();
  for (const Scenario& s : problem.scenarios)
    sc.push_back({{"pi", s.probability}, {"q", s.q}, {"T", matrix_json(s.T)}, {"h", s.h}});
  doc["scenarios"] = sc;
  return doc.dump(2) + "\n";
}

std::string write_native(const StochasticTemplate& tmpl) {
  json doc = header(tmpl.name, tmpl.first, tmpl.W);
  doc["nominal"] = {{"q", tmpl.q}, {"T", matrix_json(tmpl.T)}, {"h", tmpl.h}};
  json random = json::array();
  for (const RandomEntry& e : tmpl.random) {
    json outcomes = json::array();
    for (const Outcome& o : e.outcomes) outcomes.push_back({o.value, o.probability});
    random.push_back({{"target", to_string(e.target)}, {"row", e.row}, {"col", e.col}, {"outcomes", outcomes}});
  }
  doc["random"] = random;
  return doc.dump(2) + "\n";
}

NativeDocument read_native_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError({{"native", 1, "cannot open '" + path + "'"}});
  std::ostringstream os;
  os << in.rdbuf();
  return parse_native(os.str());
}

}  // namespace lshaped
