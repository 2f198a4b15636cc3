#include "lshaped/engine.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include <spdlog/spdlog.h>

#include "master.hpp"

namespace lshaped {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "Converged";
    case SolveStatus::iteration_limit: return "IterationLimit";
    case SolveStatus::master_infeasible: return "MasterInfeasible";
  }
  return "?";
}

std::vector<std::string> validate_config(const EngineConfig& config, std::size_t N) {
  std::vector<std::string> out;
  if (!(config.rel_tol > 0.0)) out.push_back("rel_tol must be positive");
  if (!(config.violation_tol >= 0.0)) out.push_back("violation tolerance must be nonnegative");
  if (config.workers < 1) out.push_back("workers must be at least 1");
  if (config.max_iterations < 1) out.push_back("max_iterations must be at least 1");
  for (auto& m : validate_scheme(config.scheme, N)) out.push_back(std::move(m));
  return out;
}

SubproblemResult solve_subproblem(const TwoStageProblem& problem, std::size_t s, std::span<const double> x) {
  if (s >= problem.num_scenarios()) throw std::invalid_argument("solve_subproblem: scenario out of range");
  if (x.size() != problem.n()) throw std::invalid_argument("solve_subproblem: x has the wrong length");
  const Scenario& sc = problem.scenarios[s];
  const std::size_t rows = problem.recourse_rows();
  const std::size_t m = problem.m();

  LinearProgram lp(rows, m);
  lp.objective = sc.q;
  lp.A = problem.W;
  const std::vector<double> tx = sc.T.multiply(x);
  for (std::size_t i = 0; i < rows; ++i) lp.rhs[i] = sc.h[i] - tx[i];

  const LpSolution sol = solve_lp(lp);
  SubproblemResult out;
  switch (sol.status) {
    case LpStatus::optimal:
      out.feasible = true;
      out.value = sol.objective;
      out.duals = sol.duals;
      break;
    case LpStatus::infeasible:
      out.farkas = sol.farkas;
      break;
    case LpStatus::unbounded:
      throw std::runtime_error("subproblem " + std::to_string(s) + " is unbounded; the recourse cost is not bounded below");
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Solves every scenario at x. Each worker pulls the next index; results are
// stored by scenario so the caller always reduces in index order.
std::vector<SubproblemResult> solve_all(const TwoStageProblem& problem, std::span<const double> x,
                                        std::size_t workers) {
  const std::size_t N = problem.num_scenarios();
  std::vector<SubproblemResult> results(N);
  std::vector<std::exception_ptr> errors(N);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t s = next++; s < N; s = next++) {
      try {
        results[s] = solve_subproblem(problem, s, x);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(workers, N);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

AggregationScheme mix_seed(AggregationScheme scheme, std::uint64_t seed) {
  if (auto* c = std::get_if<Cluster>(&scheme)) c->rule.seed ^= seed;
  if (auto* g = std::get_if<Granulated>(&scheme))
    if (auto* c = std::get_if<Cluster>(&g->inner)) c->rule.seed ^= seed;
  return scheme;
}

// Theta layout: one slot per scenario, or one per granule when granulated.
struct Layout {
  std::size_t unit_size = 1;
  std::size_t units = 0;
  BaseScheme scheme;

  std::vector<std::size_t> slots_of(const std::vector<std::size_t>& members) const {
    std::vector<std::size_t> out;
    for (std::size_t s : members)
      if (out.empty() || out.back() != s / unit_size) out.push_back(s / unit_size);
    return out;
  }
};

Layout make_layout(const AggregationScheme& scheme, std::size_t N) {
  Layout l;
  if (const auto* g = std::get_if<Granulated>(&scheme)) {
    l.unit_size = g->T0;
    l.units = (N + g->T0 - 1) / g->T0;
    l.scheme = g->inner;
  } else {
    l.units = N;
    l.scheme = std::visit(
        [](const auto& v) -> BaseScheme {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, Granulated>)
            throw std::logic_error("unreachable");
          else
            return v;
        },
        scheme);
  }
  return l;
}

// Violation against master theta values; an uncovered slot counts as -inf.
double cut_violation(const OptimalityCut& cut, const Layout& layout, const detail::Master& master,
                     const detail::Master::Result& iterate) {
  double theta = 0.0;
  for (std::size_t t : layout.slots_of(cut.members)) {
    if (!master.covered(t)) return std::numeric_limits<double>::infinity();
    theta += iterate.theta[t];
  }
  return violation(cut, iterate.x, theta);
}

}  // namespace

SolveReport solve_lshaped(const TwoStageProblem& problem, const EngineConfig& config) {
  if (auto problems = validate_problem(problem); !problems.empty())
    throw std::invalid_argument("invalid problem: " + problems.front());
  const std::size_t N = problem.num_scenarios();
  if (auto problems = validate_config(config, N); !problems.empty())
    throw std::invalid_argument("invalid configuration: " + problems.front());

  const auto start = Clock::now();
  const AggregationScheme scheme = mix_seed(config.scheme, config.seed);
  const Layout layout = make_layout(scheme, N);
  detail::Master master(problem.first, layout.units);

  SolveReport report;
  report.objective = std::numeric_limits<double>::infinity();
  double upper_best = std::numeric_limits<double>::infinity();
  bool done = false;

  for (std::size_t k = 1; k <= config.max_iterations && !done; ++k) {
    const detail::Master::Result it = master.solve();
    if (!it.feasible) {
      report.status = SolveStatus::master_infeasible;
      spdlog::info("iteration {}: master infeasible", k);
      break;
    }

    IterationRecord rec;
    rec.k = k;
    rec.x = it.x;
    rec.lower = master.all_covered() ? it.objective : kNegInf;
    rec.upper = std::numeric_limits<double>::infinity();

    const std::vector<SubproblemResult> results = solve_all(problem, it.x, config.workers);

    bool any_infeasible = false;
    for (std::size_t s = 0; s < N; ++s) {
      if (results[s].feasible) continue;
      any_infeasible = true;
      FeasibilityCut cut = make_feasibility_cut(s, results[s].farkas, problem.scenarios[s], problem.W, k);
      master.add_feasibility(cut.grad, cut.offset);
      report.feasibility_cuts.push_back(std::move(cut));
      ++rec.feasibility_cuts;
    }
    if (any_infeasible) {
      spdlog::debug("iteration {}: {} feasibility cuts", k, rec.feasibility_cuts);
      report.history.push_back(std::move(rec));
      continue;
    }

    double upper = dot(problem.first.c, it.x);
    for (std::size_t s = 0; s < N; ++s) upper += problem.scenarios[s].probability * results[s].value;
    rec.upper = upper;
    if (upper < upper_best) {
      upper_best = upper;
      report.x_star = it.x;
    }

    if (std::isfinite(rec.lower) &&
        (upper_best - rec.lower) / std::max(1.0, std::abs(upper_best)) <= config.rel_tol) {
      spdlog::debug("iteration {}: lower {} upper {} (gap closed)", k, rec.lower, upper_best);
      report.status = SolveStatus::converged;
      report.history.push_back(std::move(rec));
      done = true;
      break;
    }

    // Singleton cuts in scenario order, granulated first when the layout asks for it.
    std::vector<OptimalityCut> singles;
    singles.reserve(N);
    for (std::size_t s = 0; s < N; ++s)
      singles.push_back(make_optimality_cut(s, results[s].duals, problem.scenarios[s], k));
    std::vector<OptimalityCut> units =
        layout.unit_size == 1 ? std::move(singles) : granulate(singles, layout.unit_size);

    std::vector<OptimalityCut> survivors;
    for (auto& u : units) {
      if (is_violated(cut_violation(u, layout, master, it), u.offset, config.violation_tol))
        survivors.push_back(std::move(u));
      else
        ++rec.cuts_skipped;
    }

    const std::vector<OptimalityCut> aggregates =
        apply_units(layout.scheme, survivors, layout.unit_size, layout.units);
    std::vector<OptimalityCut> added;
    for (const auto& a : aggregates) {
      rec.partition_used.push_back(a.members);
      if (is_violated(cut_violation(a, layout, master, it), a.offset, config.violation_tol)) {
        added.push_back(a);
      } else {
        rec.cuts_skipped += layout.slots_of(a.members).size();
      }
    }
    for (auto& a : added) {
      master.add_optimality(a.grad, a.offset, layout.slots_of(a.members));
      report.optimality_cuts.push_back(std::move(a));
    }
    rec.cuts_added = added.size();
    spdlog::debug("iteration {}: lower {} upper {} cuts {} skipped {}", k, rec.lower, upper_best,
                  rec.cuts_added, rec.cuts_skipped);
    report.history.push_back(std::move(rec));
    if (added.empty()) {
      report.status = SolveStatus::converged;
      done = true;
    }
  }
  if (!done && report.status != SolveStatus::master_infeasible) report.status = SolveStatus::iteration_limit;

  report.objective = upper_best;
  if (report.status == SolveStatus::master_infeasible) report.objective = std::numeric_limits<double>::quiet_NaN();
  report.metrics.iterations = report.history.size();
  report.metrics.optimality_cuts = master.optimality_rows();
  report.metrics.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

RelativeComplexity compute_relative_complexities(const SolveReport& run, const SolveReport& multi_baseline,
                                                 const SolveReport& single_baseline) {
  for (const SolveReport* r : {&run, &multi_baseline, &single_baseline})
    if (r->status != SolveStatus::converged)
      throw std::invalid_argument("relative complexities need three converged runs");
  RelativeComplexity out;
  auto ratio = [](double a, double b) { return b > 0.0 ? a / b : std::numeric_limits<double>::quiet_NaN(); };
  out.rel_cut = ratio(static_cast<double>(run.metrics.optimality_cuts),
                      static_cast<double>(multi_baseline.metrics.optimality_cuts));
  out.rel_iter = ratio(static_cast<double>(run.metrics.iterations),
                       static_cast<double>(single_baseline.metrics.iterations));
  out.rel_time = ratio(run.metrics.seconds, single_baseline.metrics.seconds);
  return out;
}

}  // namespace lshaped
