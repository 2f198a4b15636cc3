#include "lshaped/smps.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace lshaped {

std::string to_string(const ParseDiagnostic& d) {
  return d.file + ":" + std::to_string(d.line) + ": " + d.message;
}

namespace {

std::string join(const std::vector<ParseDiagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    if (!out.empty()) out += '\n';
    out += to_string(d);
  }
  return out.empty() ? "parse error" : out;
}

}  // namespace

ParseError::ParseError(std::vector<ParseDiagnostic> diagnostics)
    : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Line {
  std::size_t number = 0;
  bool header = false;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '*') continue;
    Line line;
    line.number = number;
    line.header = raw[0] != ' ' && raw[0] != '\t';
    std::istringstream fields(raw);
    std::string tok;
    while (fields >> tok) line.tokens.push_back(tok);
    if (line.tokens.empty()) continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

// Collects diagnostics for one file; fail() throws with everything so far.
class Reporter {
 public:
  explicit Reporter(std::string file) : file_(std::move(file)) {}

  void error(std::size_t line, std::string message) {
    diagnostics_.push_back({file_, std::max<std::size_t>(line, 1), std::move(message)});
  }
  [[noreturn]] void fail(std::size_t line, std::string message) {
    error(line, std::move(message));
    throw ParseError(diagnostics_);
  }
  void check() const {
    if (!diagnostics_.empty()) throw ParseError(diagnostics_);
  }

 private:
  std::string file_;
  std::vector<ParseDiagnostic> diagnostics_;
};

std::optional<double> to_double(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

double number(Reporter& rep, const Line& line, const std::string& token) {
  auto v = to_double(token);
  if (!v) rep.fail(line.number, "expected a number, got '" + token + "'");
  return *v;
}

// ---------------------------------------------------------------------------
// CORE

struct CoreRow {
  std::string name;
  char type = 'E';
  double rhs = 0.0;
  std::optional<double> range;
  std::size_t line = 0;
};

struct CoreColumn {
  std::string name;
  std::vector<std::pair<std::size_t, double>> entries;  // (row, value)
  double objective = 0.0;
  double upper = kInf;
  bool free = false;
  std::size_t line = 0;
};

struct Core {
  std::string name;
  std::vector<CoreRow> rows;  // all rows, objective included
  std::optional<std::size_t> objective;
  std::vector<CoreColumn> columns;
  std::unordered_map<std::string, std::size_t> row_index;
  std::unordered_map<std::string, std::size_t> column_index;
  std::optional<std::string> rhs_set;
};

// "set row value [row value]" or the same without the set name.
void read_pairs(Reporter& rep, const Line& line, Core& core, bool range) {
  const auto& t = line.tokens;
  const std::size_t first = t.size() % 2 == 1 ? 1 : 0;
  if (t.size() < 2 || t.size() > 5) rep.fail(line.number, "expected [set] row value [row value]");
  if (first == 1 && !range) {
    if (!core.rhs_set) core.rhs_set = t[0];
    if (*core.rhs_set != t[0]) return;  // only the first RHS vector is used
  }
  for (std::size_t i = first; i + 1 < t.size(); i += 2) {
    auto it = core.row_index.find(t[i]);
    if (it == core.row_index.end()) {
      rep.error(line.number, "unknown row '" + t[i] + "'");
      continue;
    }
    const double v = number(rep, line, t[i + 1]);
    CoreRow& row = core.rows[it->second];
    if (range) {
      if (row.type == 'N') rep.error(line.number, "range on objective row '" + row.name + "'");
      row.range = v;
    } else if (core.objective && it->second == *core.objective) {
      if (v != 0.0) rep.error(line.number, "objective constants are not supported");
    } else {
      row.rhs = v;
    }
  }
}

void read_bound(Reporter& rep, const Line& line, Core& core) {
  const auto& t = line.tokens;
  const std::string type = t[0];
  const bool needs_value = type == "UP" || type == "LO" || type == "FX" || type == "LI" || type == "UI";
  const bool no_value = type == "FR" || type == "MI" || type == "PL" || type == "BV";
  if (!needs_value && !no_value) rep.fail(line.number, "unknown bound type '" + type + "'");
  if (type == "BV" || type == "LI" || type == "UI") rep.fail(line.number, "integer bounds are not supported");
  std::size_t col_pos;
  if (needs_value) {
    if (t.size() != 3 && t.size() != 4) rep.fail(line.number, "expected " + type + " [set] column value");
    col_pos = t.size() - 2;
  } else {
    if (t.size() != 2 && t.size() != 3) rep.fail(line.number, "expected " + type + " [set] column");
    col_pos = t.size() - 1;
  }
  auto it = core.column_index.find(t[col_pos]);
  if (it == core.column_index.end()) rep.fail(line.number, "unknown column '" + t[col_pos] + "'");
  CoreColumn& col = core.columns[it->second];
  if (type == "FR" || type == "MI") {
    col.free = true;
    return;
  }
  if (type == "PL") return;
  const double v = number(rep, line, t.back());
  if (type == "UP") {
    if (v < 0.0) rep.fail(line.number, "negative upper bound on '" + col.name + "'");
    col.upper = v;
  } else if (v != 0.0) {
    rep.fail(line.number, "nonzero lower bounds are not supported ('" + col.name + "')");
  } else if (type == "FX") {
    col.upper = 0.0;
  }
}

Core parse_core(const std::string& text) {
  Reporter rep("core");
  Core core;
  std::string section;
  std::optional<std::size_t> current_column;
  bool ended = false;
  for (const Line& line : tokenize(text)) {
    if (ended) break;
    const auto& t = line.tokens;
    if (line.header) {
      section = t[0];
      if (section == "NAME") {
        if (t.size() > 1) core.name = t[1];
      } else if (section == "ENDATA") {
        ended = true;
      } else if (section == "OBJSENSE") {
        if (t.size() > 1 && t[1] != "MIN" && t[1] != "MINIMIZE") rep.fail(line.number, "only minimization is supported");
      } else if (section != "ROWS" && section != "COLUMNS" && section != "RHS" && section != "RANGES" &&
                 section != "BOUNDS") {
        rep.fail(line.number, "unknown section '" + section + "'");
      }
      continue;
    }
    if (section == "ROWS") {
      if (t.size() != 2 || t[0].size() != 1 || std::string("NELG").find(t[0][0]) == std::string::npos)
        rep.fail(line.number, "expected row type (N, E, L, G) and name");
      if (core.row_index.count(t[1])) rep.fail(line.number, "duplicate row '" + t[1] + "'");
      core.row_index[t[1]] = core.rows.size();
      if (t[0][0] == 'N' && !core.objective) core.objective = core.rows.size();
      core.rows.push_back({t[1], t[0][0], 0.0, std::nullopt, line.number});
    } else if (section == "COLUMNS") {
      if (t.size() >= 2 && (t[1] == "'MARKER'" || t[1] == "MARKER"))
        rep.fail(line.number, "integer markers are not supported");
      if (t.size() != 3 && t.size() != 5) rep.fail(line.number, "expected column row value [row value]");
      if (!current_column || core.columns[*current_column].name != t[0]) {
        if (core.column_index.count(t[0])) rep.fail(line.number, "column '" + t[0] + "' is not contiguous");
        core.column_index[t[0]] = core.columns.size();
        current_column = core.columns.size();
        core.columns.push_back({t[0], {}, 0.0, kInf, false, line.number});
      }
      CoreColumn& col = core.columns[*current_column];
      for (std::size_t i = 1; i + 1 < t.size(); i += 2) {
        auto it = core.row_index.find(t[i]);
        if (it == core.row_index.end()) {
          rep.error(line.number, "unknown row '" + t[i] + "'");
          continue;
        }
        const double v = number(rep, line, t[i + 1]);
        const CoreRow& row = core.rows[it->second];
        if (row.type == 'N') {
          if (core.objective && it->second == *core.objective) col.objective += v;
        } else {
          col.entries.emplace_back(it->second, v);
        }
      }
    } else if (section == "RHS") {
      read_pairs(rep, line, core, false);
    } else if (section == "RANGES") {
      read_pairs(rep, line, core, true);
    } else if (section == "BOUNDS") {
      read_bound(rep, line, core);
    } else {
      rep.fail(line.number, "data line outside of a section");
    }
  }
  if (!core.objective) rep.error(1, "no objective (N) row");
  if (core.columns.empty()) rep.error(1, "no columns");
  rep.check();
  return core;
}

// ---------------------------------------------------------------------------
// TIME

struct Stages {
  std::vector<int> row_stage;     // per core row; 0 for objective rows
  std::vector<int> column_stage;  // per core column
};

Stages parse_time(const std::string& text, const Core& core) {
  Reporter rep("time");
  std::string section;
  std::vector<std::string> periods;
  std::vector<std::pair<std::string, std::string>> implicit_starts;  // (column, row)
  std::vector<std::size_t> implicit_lines;
  std::map<std::string, int> explicit_rows, explicit_cols;
  bool ended = false;
  std::size_t periods_line = 1;

  auto period_number = [&](const Line& line, const std::string& name) {
    for (std::size_t i = 0; i < periods.size(); ++i)
      if (periods[i] == name) return static_cast<int>(i) + 1;
    rep.fail(line.number, "unknown period '" + name + "'");
  };

  for (const Line& line : tokenize(text)) {
    if (ended) break;
    const auto& t = line.tokens;
    if (line.header) {
      section = t[0];
      if (section == "ENDATA") ended = true;
      else if (section == "PERIODS") periods_line = line.number;
      else if (section != "TIME" && section != "ROWS" && section != "COLUMNS")
        rep.fail(line.number, "unknown section '" + section + "'");
      continue;
    }
    if (section == "PERIODS") {
      if (t.size() == 3) {
        implicit_starts.emplace_back(t[0], t[1]);
        implicit_lines.push_back(line.number);
        periods.push_back(t[2]);
      } else if (t.size() == 1) {
        periods.push_back(t[0]);
      } else {
        rep.fail(line.number, "expected column row period, or a period name");
      }
      if (periods.size() > 2) rep.fail(line.number, "expected exactly two periods");
    } else if (section == "ROWS" || section == "COLUMNS") {
      if (t.size() != 2) rep.fail(line.number, "expected name period");
      const int p = period_number(line, t[1]);
      if (section == "ROWS") {
        if (!core.row_index.count(t[0])) rep.fail(line.number, "unknown row '" + t[0] + "'");
        explicit_rows[t[0]] = p;
      } else {
        if (!core.column_index.count(t[0])) rep.fail(line.number, "unknown column '" + t[0] + "'");
        explicit_cols[t[0]] = p;
      }
    } else {
      rep.fail(line.number, "data line outside of a section");
    }
  }
  if (periods.size() != 2) rep.fail(periods_line, "expected exactly two periods");
  if (!implicit_starts.empty() && implicit_starts.size() != periods.size())
    rep.fail(periods_line, "mixed implicit and explicit period lists");

  Stages st;
  st.row_stage.assign(core.rows.size(), 1);
  st.column_stage.assign(core.columns.size(), 1);
  if (!implicit_starts.empty()) {
    for (std::size_t p = 0; p < 2; ++p) {
      if (!core.column_index.count(implicit_starts[p].first))
        rep.fail(implicit_lines[p], "unknown column '" + implicit_starts[p].first + "'");
      if (!core.row_index.count(implicit_starts[p].second))
        rep.fail(implicit_lines[p], "unknown row '" + implicit_starts[p].second + "'");
    }
    const std::size_t col1 = core.column_index.at(implicit_starts[0].first);
    const std::size_t col2 = core.column_index.at(implicit_starts[1].first);
    const std::size_t row1 = core.row_index.at(implicit_starts[0].second);
    const std::size_t row2 = core.row_index.at(implicit_starts[1].second);
    if (col1 != 0) rep.fail(implicit_lines[0], "first period must start at the first column");
    if (col2 <= col1) rep.fail(implicit_lines[1], "second period must start after the first");
    if (row2 <= row1 || core.rows[row2].type == 'N')
      rep.fail(implicit_lines[1], "second period must start at a constraint row after the first period's row");
    for (std::size_t j = col2; j < core.columns.size(); ++j) st.column_stage[j] = 2;
    for (std::size_t i = row2; i < core.rows.size(); ++i) st.row_stage[i] = 2;
  } else {
    for (std::size_t i = 0; i < core.rows.size(); ++i) {
      if (core.rows[i].type == 'N') continue;
      auto it = explicit_rows.find(core.rows[i].name);
      if (it == explicit_rows.end()) rep.error(1, "row '" + core.rows[i].name + "' has no period");
      else st.row_stage[i] = it->second;
    }
    for (std::size_t j = 0; j < core.columns.size(); ++j) {
      auto it = explicit_cols.find(core.columns[j].name);
      if (it == explicit_cols.end()) rep.error(1, "column '" + core.columns[j].name + "' has no period");
      else st.column_stage[j] = it->second;
    }
  }
  for (std::size_t i = 0; i < core.rows.size(); ++i)
    if (core.rows[i].type == 'N') st.row_stage[i] = 0;
  rep.check();
  bool any_second_column = false;
  for (int s : st.column_stage) any_second_column |= s == 2;
  if (!any_second_column) rep.fail(periods_line, "second period has no columns");
  return st;
}

// ---------------------------------------------------------------------------
// Assembly into two-stage block form

struct StageBuild {
  std::vector<double> cost;
  std::vector<std::map<std::size_t, double>> own;    // coefficients on this stage's variables
  std::vector<std::map<std::size_t, double>> first;  // stage-2 rows only: coefficients on x
  std::vector<double> rhs;

  std::size_t add_var(double c) {
    cost.push_back(c);
    return cost.size() - 1;
  }
  std::size_t add_row(double r) {
    own.emplace_back();
    first.emplace_back();
    rhs.push_back(r);
    return rhs.size() - 1;
  }
};

struct ColumnPlace {
  int stage = 1;
  std::size_t pos = 0;
  std::optional<std::size_t> negative;  // split part of a free column
};

struct RowPlace {
  int stage = 1;
  std::size_t pos = 0;
  double shift = 0.0;  // stored rhs = random rhs + shift
};

struct Assembled {
  StochasticTemplate tmpl;
  std::vector<ColumnPlace> columns;
  std::vector<RowPlace> rows;
};

Matrix to_matrix(const std::vector<std::map<std::size_t, double>>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [j, v] : rows[i]) m(i, j) = v;
  return m;
}

Assembled assemble(const Core& core, const Stages& st) {
  Reporter rep("core");
  StageBuild stage[2];
  Assembled out;
  out.columns.resize(core.columns.size());
  out.rows.resize(core.rows.size());

  for (std::size_t j = 0; j < core.columns.size(); ++j) {
    const int s = st.column_stage[j];
    out.columns[j].stage = s;
    out.columns[j].pos = stage[s - 1].add_var(core.columns[j].objective);
  }
  for (std::size_t j = 0; j < core.columns.size(); ++j) {
    if (!core.columns[j].free) continue;
    const int s = st.column_stage[j];
    out.columns[j].negative = stage[s - 1].add_var(-core.columns[j].objective);
  }

  // Constraint rows in core order, then the extra rows of ranges and bounds.
  struct Extra {
    int stage;
    std::map<std::size_t, double> coef;
    double rhs;
  };
  std::vector<Extra> extras;
  for (std::size_t i = 0; i < core.rows.size(); ++i) {
    const CoreRow& row = core.rows[i];
    if (row.type == 'N') continue;
    const int s = st.row_stage[i];
    StageBuild& b = stage[s - 1];
    out.rows[i].stage = s;
    if (!row.range) {
      out.rows[i].pos = b.add_row(row.rhs);
      if (row.type == 'L') b.own.back()[b.add_var(0.0)] = 1.0;
      if (row.type == 'G') b.own.back()[b.add_var(0.0)] = -1.0;
      continue;
    }
    const double r = std::abs(*row.range);
    double lo = row.rhs;
    if (row.type == 'L' || (row.type == 'E' && *row.range < 0.0)) lo = row.rhs - r;
    out.rows[i].shift = lo - row.rhs;
    out.rows[i].pos = b.add_row(lo);
    const std::size_t slack = b.add_var(0.0);
    b.own.back()[slack] = -1.0;
    extras.push_back({s, {{slack, 1.0}}, r});
  }
  for (std::size_t j = 0; j < core.columns.size(); ++j) {
    const CoreColumn& col = core.columns[j];
    const ColumnPlace& place = out.columns[j];
    for (const auto& [i, v] : col.entries) {
      const int rs = st.row_stage[i];
      StageBuild& b = stage[rs - 1];
      const std::size_t r = out.rows[i].pos;
      if (place.stage == rs) {
        b.own[r][place.pos] += v;
        if (place.negative) b.own[r][*place.negative] -= v;
      } else if (place.stage == 1 && rs == 2) {
        b.first[r][place.pos] += v;
        if (place.negative) b.first[r][*place.negative] -= v;
      } else {
        rep.error(col.line, "second-period column '" + col.name + "' appears in first-period row '" +
                                core.rows[i].name + "'");
      }
    }
    if (std::isfinite(col.upper)) {
      std::map<std::size_t, double> coef{{place.pos, 1.0}};
      if (place.negative) coef[*place.negative] = -1.0;
      extras.push_back({place.stage, coef, col.upper});
    }
  }
  for (auto& e : extras) {
    StageBuild& b = stage[e.stage - 1];
    const std::size_t slack = b.add_var(0.0);
    b.add_row(e.rhs);
    b.own.back() = e.coef;
    b.own.back()[slack] = 1.0;
  }
  rep.check();

  StochasticTemplate& t = out.tmpl;
  t.name = core.name;
  t.first.c = stage[0].cost;
  t.first.A = to_matrix(stage[0].own, stage[0].cost.size());
  t.first.b = stage[0].rhs;
  t.W = to_matrix(stage[1].own, stage[1].cost.size());
  t.q = stage[1].cost;
  t.T = to_matrix(stage[1].first, stage[0].cost.size());
  t.h = stage[1].rhs;
  if (t.first.A.rows() == 0) t.first.A = Matrix(0, t.first.c.size());
  return out;
}

// ---------------------------------------------------------------------------
// STOCH

void parse_stoch(const std::string& text, const Core& core, Assembled& as) {
  Reporter rep("stoch");
  StochasticTemplate& t = as.tmpl;
  std::string section;
  bool add_mode = false;
  bool ended = false;
  bool in_indep = false;

  struct Pending {
    std::string col, row;
    RandomEntry entry;
    double nominal = 0.0;
    double shift = 0.0;
    std::size_t line = 0;
    double total = 0.0;
  };
  std::optional<Pending> pending;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;

  auto flush = [&] {
    if (!pending) return;
    if (std::abs(pending->total - 1.0) > kProbabilityTolerance) {
      std::ostringstream os;
      os << "outcome probabilities for (" << pending->col << ", " << pending->row << ") sum to " << pending->total;
      rep.error(pending->line, os.str());
    }
    t.random.push_back(std::move(pending->entry));
    pending.reset();
  };

  for (const Line& line : tokenize(text)) {
    if (ended) break;
    const auto& tok = line.tokens;
    if (line.header) {
      flush();
      section = tok[0];
      in_indep = false;
      if (section == "STOCH") continue;
      if (section == "ENDATA") {
        ended = true;
        continue;
      }
      if (section == "BLOCKS" || section == "SCENARIOS")
        rep.fail(line.number, section + " sections are not supported (INDEP DISCRETE only)");
      if (section != "INDEP") rep.fail(line.number, "unknown section '" + section + "'");
      if (tok.size() < 2 || tok[1] != "DISCRETE")
        rep.fail(line.number, "only INDEP DISCRETE distributions are supported");
      if (tok.size() > 3) rep.fail(line.number, "unexpected fields after INDEP DISCRETE");
      add_mode = false;
      if (tok.size() == 3) {
        if (tok[2] == "ADD") add_mode = true;
        else if (tok[2] != "REPLACE") rep.fail(line.number, "unsupported modification '" + tok[2] + "'");
      }
      in_indep = true;
      continue;
    }
    if (!in_indep) rep.fail(line.number, "data line outside of an INDEP section");
    if (tok.size() != 4 && tok.size() != 5) rep.fail(line.number, "expected column row value [period] probability");
    const std::string& col = tok[0];
    const std::string& row = tok[1];
    const double value = number(rep, line, tok[2]);
    const double prob = number(rep, line, tok.back());
    if (prob <= 0.0 || prob > 1.0) rep.fail(line.number, "probability must lie in (0, 1]");

    if (!pending || pending->col != col || pending->row != row) {
      flush();
      if (seen.count({col, row})) rep.fail(line.number, "duplicate random entry (" + col + ", " + row + ")");
      seen[{col, row}] = line.number;
      auto rit = core.row_index.find(row);
      if (rit == core.row_index.end()) rep.fail(line.number, "unknown row '" + row + "'");
      const std::size_t ri = rit->second;
      const bool is_objective = core.objective && ri == *core.objective;
      auto cit = core.column_index.find(col);
      Pending p;
      p.col = col;
      p.row = row;
      p.line = line.number;
      if (is_objective) {
        if (cit == core.column_index.end()) rep.fail(line.number, "unknown column '" + col + "'");
        const ColumnPlace& cp = as.columns[cit->second];
        if (cp.stage != 2) rep.fail(line.number, "first-period costs cannot be random");
        if (cp.negative) rep.fail(line.number, "random entries on free columns are not supported");
        p.entry.target = RandomTarget::q;
        p.entry.col = cp.pos;
        p.nominal = t.q[cp.pos];
      } else if (core.rows[ri].type == 'N') {
        rep.fail(line.number, "row '" + row + "' is not the objective");
      } else {
        const RowPlace& rp = as.rows[ri];
        if (rp.stage != 2) rep.fail(line.number, "first-period rows cannot be random");
        if (cit == core.column_index.end()) {
          if (core.rhs_set && col != *core.rhs_set)
            rep.fail(line.number, "'" + col + "' is neither a column nor the RHS vector");
          p.entry.target = RandomTarget::h;
          p.entry.row = rp.pos;
          p.nominal = t.h[rp.pos];
          p.shift = rp.shift;
        } else {
          const ColumnPlace& cp = as.columns[cit->second];
          if (cp.stage == 2) rep.fail(line.number, "recourse matrix W must be fixed");
          if (cp.negative) rep.fail(line.number, "random entries on free columns are not supported");
          p.entry.target = RandomTarget::T;
          p.entry.row = rp.pos;
          p.entry.col = cp.pos;
          p.nominal = t.T(rp.pos, cp.pos);
        }
      }
      pending = std::move(p);
    }
    const double stored = add_mode ? pending->nominal + value : value + pending->shift;
    pending->entry.outcomes.push_back({stored, prob});
    pending->total += prob;
  }
  flush();
  rep.check();
}

}  // namespace

StochasticTemplate parse_smps(const SmpsTriple& files) {
  const Core core = parse_core(files.core_text);
  const Stages stages = parse_time(files.time_text, core);
  Assembled as = assemble(core, stages);
  parse_stoch(files.stoch_text, core, as);
  if (auto problems = validate_template(as.tmpl); !problems.empty()) {
    std::vector<ParseDiagnostic> diags;
    for (auto& p : problems) diags.push_back({"stoch", 1, std::move(p)});
    throw ParseError(std::move(diags));
  }
  return std::move(as.tmpl);
}

SmpsTriple read_smps_files(const std::string& core, const std::string& time, const std::string& stoch) {
  auto slurp = [](const std::string& path, const char* which) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError({{which, 1, "cannot open '" + path + "'"}});
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  return {slurp(core, "core"), slurp(time, "time"), slurp(stoch, "stoch")};
}

}  // namespace lshaped
