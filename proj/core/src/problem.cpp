#include "lshaped/problem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lshaped/rng.hpp"

namespace lshaped {

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void check_first_stage(const FirstStage& first, std::vector<std::string>& out) {
  if (first.n() == 0) out.push_back("first stage has no variables");
  if (first.A.rows() != first.p())
    out.push_back("A has " + std::to_string(first.A.rows()) + " rows, expected " +
                  std::to_string(first.p()));
  if (first.p() > 0 && first.A.cols() != first.n())
    out.push_back("A has " + std::to_string(first.A.cols()) + " columns, expected " +
                  std::to_string(first.n()));
  if (!all_finite(first.c) || !all_finite(first.b) || !all_finite(first.A.data()))
    out.push_back("first-stage data has non-finite entries");
}

void check_second_stage_block(const std::string& label, const std::vector<double>& q, const Matrix& T,
                              const std::vector<double>& h, std::size_t n, const Matrix& W,
                              std::vector<std::string>& out) {
  if (q.size() != W.cols())
    out.push_back("q" + label + " has " + std::to_string(q.size()) + " entries, expected " +
                  std::to_string(W.cols()));
  if (h.size() != W.rows())
    out.push_back("h" + label + " has " + std::to_string(h.size()) + " entries, expected " +
                  std::to_string(W.rows()));
  if (T.rows() != W.rows())
    out.push_back("T" + label + " has " + std::to_string(T.rows()) + " rows, expected " +
                  std::to_string(W.rows()));
  if (W.rows() > 0 && T.cols() != n)
    out.push_back("T" + label + " has " + std::to_string(T.cols()) + " columns, expected " +
                  std::to_string(n));
  if (!all_finite(q) || !all_finite(h) || !all_finite(T.data()))
    out.push_back("scenario" + label + " has non-finite entries");
}

}  // namespace

std::string to_string(RandomTarget target) {
  switch (target) {
    case RandomTarget::h: return "h";
    case RandomTarget::q: return "q";
    case RandomTarget::T: return "T";
  }
  return "?";
}

std::vector<std::string> validate_problem(const TwoStageProblem& problem) {
  std::vector<std::string> out;
  check_first_stage(problem.first, out);
  if (!all_finite(problem.W.data())) out.push_back("W has non-finite entries");
  if (problem.scenarios.empty()) {
    out.push_back("N >= 1 required");
    return out;
  }
  double total = 0.0;
  for (std::size_t s = 0; s < problem.scenarios.size(); ++s) {
    const Scenario& sc = problem.scenarios[s];
    const std::string label = "[" + std::to_string(s) + "]";
    if (!(sc.probability > 0.0) || sc.probability > 1.0)
      out.push_back("probability" + label + " = " + format_number(sc.probability) +
                    " is outside (0, 1]");
    total += sc.probability;
    check_second_stage_block(label, sc.q, sc.T, sc.h, problem.n(), problem.W, out);
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance)
    out.push_back("probabilities sum to " + format_number(total));
  return out;
}

std::vector<std::string> validate_template(const StochasticTemplate& tmpl) {
  std::vector<std::string> out;
  check_first_stage(tmpl.first, out);
  if (!all_finite(tmpl.W.data())) out.push_back("W has non-finite entries");
  check_second_stage_block("", tmpl.q, tmpl.T, tmpl.h, tmpl.first.n(), tmpl.W, out);
  for (std::size_t k = 0; k < tmpl.random.size(); ++k) {
    const RandomEntry& e = tmpl.random[k];
    const std::string label = "random[" + std::to_string(k) + "]";
    bool in_range = true;
    switch (e.target) {
      case RandomTarget::h: in_range = e.row < tmpl.h.size(); break;
      case RandomTarget::q: in_range = e.col < tmpl.q.size(); break;
      case RandomTarget::T: in_range = e.row < tmpl.T.rows() && e.col < tmpl.T.cols(); break;
    }
    if (!in_range) out.push_back(label + " targets a coordinate outside " + to_string(e.target));
    if (e.outcomes.empty()) {
      out.push_back(label + " has no outcomes");
      continue;
    }
    double total = 0.0;
    for (const Outcome& o : e.outcomes) {
      if (!std::isfinite(o.value)) out.push_back(label + " has a non-finite outcome value");
      if (!(o.probability > 0.0)) out.push_back(label + " has a non-positive outcome probability");
      total += o.probability;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance)
      out.push_back(label + " probabilities sum to " + format_number(total));
  }
  return out;
}

void normalize_probabilities(TwoStageProblem& problem) {
  double total = 0.0;
  for (const Scenario& s : problem.scenarios) total += s.probability;
  if (problem.scenarios.empty() || std::abs(total - 1.0) > kProbabilityTolerance)
    throw std::invalid_argument("probabilities sum to " + format_number(total));
  for (Scenario& s : problem.scenarios) s.probability /= total;
}

LinearProgram build_extensive_form(const TwoStageProblem& problem) {
  if (const auto v = validate_problem(problem); !v.empty())
    throw std::invalid_argument("build_extensive_form: " + v.front());
  const std::size_t n = problem.n();
  const std::size_t m = problem.m();
  const std::size_t r = problem.recourse_rows();
  const std::size_t p = problem.first.p();
  const std::size_t N = problem.num_scenarios();

  LinearProgram lp(p + N * r, n + N * m);
  for (std::size_t j = 0; j < n; ++j) lp.objective[j] = problem.first.c[j];
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < n; ++j) lp.A(i, j) = problem.first.A(i, j);
    lp.rhs[i] = problem.first.b[i];
  }
  for (std::size_t s = 0; s < N; ++s) {
    const Scenario& sc = problem.scenarios[s];
    const std::size_t col0 = n + s * m;
    const std::size_t row0 = p + s * r;
    for (std::size_t j = 0; j < m; ++j) lp.objective[col0 + j] = sc.probability * sc.q[j];
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < n; ++j) lp.A(row0 + i, j) = sc.T(i, j);
      for (std::size_t j = 0; j < m; ++j) lp.A(row0 + i, col0 + j) = problem.W(i, j);
      lp.rhs[row0 + i] = sc.h[i];
    }
  }
  return lp;
}

double extensive_objective(const TwoStageProblem& problem, std::span<const double> point) {
  const std::size_t n = problem.n();
  const std::size_t m = problem.m();
  if (point.size() != n + problem.num_scenarios() * m)
    throw std::invalid_argument("extensive_objective: point has the wrong length");
  double value = dot(problem.first.c, point.subspan(0, n));
  for (std::size_t s = 0; s < problem.num_scenarios(); ++s) {
    const Scenario& sc = problem.scenarios[s];
    value += sc.probability * dot(sc.q, point.subspan(n + s * m, m));
  }
  return value;
}

namespace {

Scenario nominal_scenario(const StochasticTemplate& tmpl) {
  Scenario s;
  s.probability = 1.0;
  s.q = tmpl.q;
  s.T = tmpl.T;
  s.h = tmpl.h;
  return s;
}

void apply_outcome(Scenario& s, const RandomEntry& e, double value) {
  switch (e.target) {
    case RandomTarget::h: s.h[e.row] = value; break;
    case RandomTarget::q: s.q[e.col] = value; break;
    case RandomTarget::T: s.T(e.row, e.col) = value; break;
  }
}

TwoStageProblem skeleton(const StochasticTemplate& tmpl) {
  if (const auto v = validate_template(tmpl); !v.empty())
    throw std::invalid_argument("invalid stochastic template: " + v.front());
  TwoStageProblem p;
  p.name = tmpl.name;
  p.first = tmpl.first;
  p.W = tmpl.W;
  return p;
}

}  // namespace

TwoStageProblem enumerate_scenarios(const StochasticTemplate& tmpl, std::size_t cap) {
  TwoStageProblem problem = skeleton(tmpl);
  double product = 1.0;
  for (const RandomEntry& e : tmpl.random) product *= static_cast<double>(e.outcomes.size());
  if (product > static_cast<double>(cap)) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "scenario cross product has " << product << " scenarios, exceeding the cap of " << cap;
    throw std::length_error(msg.str());
  }
  const auto count = static_cast<std::size_t>(product);

  const Scenario nominal = nominal_scenario(tmpl);
  std::vector<std::size_t> index(tmpl.random.size(), 0);
  problem.scenarios.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Scenario s = nominal;
    for (std::size_t e = 0; e < tmpl.random.size(); ++e) {
      const Outcome& o = tmpl.random[e].outcomes[index[e]];
      apply_outcome(s, tmpl.random[e], o.value);
      s.probability *= o.probability;
    }
    problem.scenarios.push_back(std::move(s));
    // Odometer increment, last entry fastest.
    for (std::size_t e = tmpl.random.size(); e-- > 0;) {
      if (++index[e] < tmpl.random[e].outcomes.size()) break;
      index[e] = 0;
    }
  }
  normalize_probabilities(problem);
  return problem;
}

TwoStageProblem sample_instance(const StochasticTemplate& tmpl, std::size_t count,
                                std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample_instance: N >= 1 required");
  TwoStageProblem problem = skeleton(tmpl);
  Xorshift64Star rng(seed);
  const Scenario nominal = nominal_scenario(tmpl);
  const double weight = 1.0 / static_cast<double>(count);
  problem.scenarios.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Scenario s = nominal;
    s.probability = weight;
    for (const RandomEntry& e : tmpl.random) {
      const double u = rng.uniform();
      double cumulative = 0.0;
      std::size_t pick = e.outcomes.size() - 1;
      for (std::size_t o = 0; o < e.outcomes.size(); ++o) {
        cumulative += e.outcomes[o].probability;
        if (u < cumulative) {
          pick = o;
          break;
        }
      }
      apply_outcome(s, e, e.outcomes[pick].value);
    }
    problem.scenarios.push_back(std::move(s));
  }
  return problem;
}

TwoStageProblem random_problem(const RandomProblemOptions& options, std::uint64_t seed) {
  if (options.decisions == 0 || options.recourse_rows == 0 || options.scenarios == 0)
    throw std::invalid_argument("random_problem: dimensions must be positive");
  Xorshift64Star rng(seed);
  const std::size_t d = options.decisions;
  const std::size_t r = options.recourse_rows;
  const std::size_t k = options.extra_recourse;
  const std::size_t n = d + 1;
  const std::size_t m = 2 * r + k;

  TwoStageProblem p;
  p.name = "random-" + std::to_string(seed);
  p.first.c.assign(n, 0.0);
  for (std::size_t j = 0; j < d; ++j) p.first.c[j] = rng.uniform(1.0, 3.0);
  p.first.A = Matrix(1, n, 1.0);
  p.first.b = {rng.uniform(4.0, 4.0 + 4.0 * static_cast<double>(d))};

  p.W = Matrix(r, m);
  std::vector<double> q(m);
  for (std::size_t i = 0; i < r; ++i) {
    p.W(i, i) = 1.0;       // shortage
    p.W(i, r + i) = -1.0;  // surplus
    q[i] = rng.uniform(4.0, 8.0);
    q[r + i] = rng.uniform(0.2, 1.0);
  }
  for (std::size_t e = 0; e < k; ++e) {
    for (std::size_t i = 0; i < r; ++i) p.W(i, 2 * r + e) = rng.uniform(0.0, 1.0);
    q[2 * r + e] = rng.uniform(1.0, 3.0);
  }

  const double weight = 1.0 / static_cast<double>(options.scenarios);
  for (std::size_t s = 0; s < options.scenarios; ++s) {
    Scenario sc;
    sc.probability = weight;
    sc.q = q;
    sc.T = Matrix(r, n);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < d; ++j) sc.T(i, j) = rng.uniform(0.5, 1.5);
    sc.h.resize(r);
    for (std::size_t i = 0; i < r; ++i) sc.h[i] = rng.uniform(1.0, 10.0);
    p.scenarios.push_back(std::move(sc));
  }
  return p;
}

}  // namespace lshaped
