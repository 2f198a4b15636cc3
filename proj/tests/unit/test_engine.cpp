#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "lshaped/engine.hpp"
#include "oracles.hpp"

using namespace lshaped;

namespace {

const std::vector<std::string> kSchemes{"multi",        "single",         "partial:T=2",
                                        "uniform:T=2",  "closest:A=2",    "kmedoids:k=2",
                                        "granulated:T0=2,inner=single"};

EngineConfig config(const std::string& scheme, double tol = 1e-6) {
  EngineConfig cfg;
  cfg.rel_tol = tol;
  cfg.scheme = parse_scheme(scheme);
  return cfg;
}

double extensive(const TwoStageProblem& p) {
  const LpSolution sol = solve_lp(build_extensive_form(p));
  REQUIRE(sol.status == LpStatus::optimal);
  return sol.objective;
}

double true_objective(const TwoStageProblem& p, const std::vector<double>& x) {
  double v = dot(p.first.c, x);
  for (std::size_t s = 0; s < p.num_scenarios(); ++s) {
    const SubproblemResult r = solve_subproblem(p, s, x);
    REQUIRE(r.feasible);
    v += p.scenarios[s].probability * r.value;
  }
  return v;
}

void check_lower_bounds(const SolveReport& r) {
  double prev = -INFINITY;
  for (const auto& rec : r.history) {
    if (!std::isfinite(rec.lower)) continue;
    CHECK(rec.lower >= prev - 1e-8);
    prev = rec.lower;
    if (std::isfinite(rec.upper)) CHECK(rec.lower <= rec.upper + 1e-6);
  }
}

// min x s.t. x = 3 with recourse y = 2 - x, y >= 0.
TwoStageProblem infeasible_recourse() {
  TwoStageProblem p;
  p.name = "infeasible";
  p.first.c = {1.0};
  p.first.A = Matrix{{1.0}};
  p.first.b = {3.0};
  p.W = Matrix{{1.0}};
  Scenario s;
  s.probability = 1.0;
  s.q = {1.0};
  s.T = Matrix{{1.0}};
  s.h = {2.0};
  p.scenarios.push_back(s);
  return p;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("subproblem values and duals") {
  const auto p = oracle::p1_problem();
  const std::vector<double> x1{1.0}, x5{5.0};
  const SubproblemResult a = solve_subproblem(p, 1, x1);
  CHECK(a.feasible);
  CHECK(a.value == doctest::Approx(3.0));
  CHECK(a.duals[0] == doctest::Approx(1.0));
  const SubproblemResult b = solve_subproblem(p, 0, x5);
  CHECK(b.value == doctest::Approx(0.0));
  CHECK(b.duals[0] == doctest::Approx(0.0));
  CHECK_THROWS_AS(solve_subproblem(p, 2, x1), std::invalid_argument);
}

TEST_CASE("infeasible subproblem gives a Farkas ray") {
  TwoStageProblem p = infeasible_recourse();
  p.first.A = Matrix(0, 1);
  p.first.b = {};
  const std::vector<double> x{3.0};
  const SubproblemResult r = solve_subproblem(p, 0, x);
  CHECK_FALSE(r.feasible);
  REQUIRE(r.farkas.size() == 1);
  CHECK(r.farkas[0] < 0.0);
  CHECK(r.farkas[0] * (2.0 - 3.0) > 0.0);
  const FeasibilityCut cut = make_feasibility_cut(0, r.farkas, p.scenarios[0], p.W);
  CHECK(cut.offset / cut.grad[0] == doctest::Approx(2.0));
}

TEST_CASE("unbounded subproblems are reported") {
  TwoStageProblem p = oracle::p1_problem();
  for (auto& s : p.scenarios) s.q = {0.0, -1.0};
  const std::vector<double> x{0.0};
  CHECK_THROWS_AS(solve_subproblem(p, 0, x), std::runtime_error);
}

TEST_CASE("P1 under every scheme") {
  const auto p = oracle::p1_problem();
  std::size_t single_iters = 0, multi_iters = 0;
  for (const auto& scheme : kSchemes) {
    CAPTURE(scheme);
    const SolveReport r = solve_lshaped(p, config(scheme));
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.objective == doctest::Approx(oracle::kP1Optimum).epsilon(1e-6));
    CHECK(oracle::p1_objective(r.x_star[0]) == doctest::Approx(r.objective).epsilon(1e-9));
    CHECK(r.metrics.iterations == r.history.size());
    check_lower_bounds(r);
    if (scheme == "single") single_iters = r.metrics.iterations;
    if (scheme == "multi") multi_iters = r.metrics.iterations;
  }
  CHECK(multi_iters <= single_iters);
}

TEST_CASE("history records") {
  const auto p = oracle::p1_problem();
  const SolveReport r = solve_lshaped(p, config("partial:T=2"));
  REQUIRE_FALSE(r.history.empty());
  CHECK(r.history[0].k == 1);
  CHECK(std::isinf(r.history[0].lower));
  std::size_t added = 0;
  for (const auto& rec : r.history) {
    added += rec.cuts_added;
    for (const auto& part : rec.partition_used) CHECK(part == std::vector<std::size_t>{0, 1});
  }
  CHECK(added == r.metrics.optimality_cuts);
  CHECK(r.optimality_cuts.size() == r.metrics.optimality_cuts);
  CHECK(r.metrics.seconds >= 0.0);
}

TEST_CASE("infeasible recourse with a fixed first stage") {
  const SolveReport r = solve_lshaped(infeasible_recourse(), config("multi"));
  CHECK(r.status == SolveStatus::master_infeasible);
  REQUIRE(r.feasibility_cuts.size() == 1);
  const FeasibilityCut& f = r.feasibility_cuts[0];
  CHECK(f.offset / f.grad[0] == doctest::Approx(2.0));
  CHECK(f.grad[0] < 0.0);
  CHECK(r.history.size() == 1);
  CHECK(r.history[0].feasibility_cuts == 1);
}

TEST_CASE("feasibility cuts steer the master") {
  // min -x + y, x + s = 5, y = 2 - x: the first master picks x = 5, then a cut brings it to 2.
  TwoStageProblem p = infeasible_recourse();
  p.first.c = {-1.0, 0.0};
  p.first.A = Matrix{{1.0, 1.0}};
  p.first.b = {5.0};
  p.scenarios[0].T = Matrix{{1.0, 0.0}};
  const SolveReport r = solve_lshaped(p, config("multi"));
  CHECK(r.status == SolveStatus::converged);
  CHECK(r.objective == doctest::Approx(-2.0));
  CHECK(r.x_star[0] == doctest::Approx(2.0));
  CHECK(r.feasibility_cuts.size() == 1);
  CHECK(std::isinf(r.history[0].upper));
}

TEST_CASE("unbounded master is an error") {
  TwoStageProblem p = oracle::p1_problem();
  p.first.c = {-1.0};
  CHECK_THROWS_AS(solve_lshaped(p, config("multi")), std::runtime_error);
}

TEST_CASE("single scenario matches the extensive form") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TwoStageProblem p = random_problem({3, 3, 1, 1}, seed);
    const double ref = extensive(p);
    for (const char* scheme : {"multi", "single", "kmedoids:k=1", "closest:A=1"}) {
      const SolveReport r = solve_lshaped(p, config(scheme));
      CHECK(r.status == SolveStatus::converged);
      CHECK(r.objective == doctest::Approx(ref).epsilon(1e-6));
    }
  }
}

TEST_CASE("random instances match the extensive form") {
  for (std::uint64_t seed = 10; seed < 16; ++seed) {
    const TwoStageProblem p = random_problem({1 + seed % 3, 1 + seed % 4, seed % 2, 8}, seed);
    const double ref = extensive(p);
    for (const auto& scheme : kSchemes) {
      CAPTURE(seed);
      CAPTURE(scheme);
      const SolveReport r = solve_lshaped(p, config(scheme));
      REQUIRE(r.status == SolveStatus::converged);
      CHECK(std::abs(r.objective - ref) <= 1e-6 * std::max(1.0, std::abs(ref)));
      CHECK(true_objective(p, r.x_star) == doctest::Approx(r.objective).epsilon(1e-6));
      check_lower_bounds(r);
    }
  }
}

TEST_CASE("worker count does not change the history") {
  const TwoStageProblem p = random_problem({3, 3, 2, 40}, 77);
  for (const char* scheme : {"multi", "closest:A=4", "kmedoids:k=5", "granulated:T0=4,inner=uniform:T=3"}) {
    EngineConfig one = config(scheme);
    EngineConfig four = one;
    four.workers = 4;
    const SolveReport a = solve_lshaped(p, one);
    const SolveReport b = solve_lshaped(p, four);
    CHECK(a.history == b.history);
    CHECK(a.objective == b.objective);
    CHECK(a.optimality_cuts == b.optimality_cuts);
  }
}

TEST_CASE("iteration limit") {
  EngineConfig cfg = config("single");
  cfg.max_iterations = 1;
  const SolveReport r = solve_lshaped(oracle::p1_problem(), cfg);
  CHECK(r.status == SolveStatus::iteration_limit);
  CHECK(r.history.size() == 1);
}

TEST_CASE("configuration checks") {
  const auto p = oracle::p1_problem();
  EngineConfig cfg;
  CHECK(validate_config(cfg, 2).empty());
  cfg.rel_tol = 0.0;
  CHECK_FALSE(validate_config(cfg, 2).empty());
  CHECK_THROWS_AS(solve_lshaped(p, cfg), std::invalid_argument);
  cfg = {};
  cfg.workers = 0;
  CHECK_FALSE(validate_config(cfg, 2).empty());
  cfg = config("partial:T=3");
  CHECK_THROWS_AS(solve_lshaped(p, cfg), std::invalid_argument);
  TwoStageProblem bad = p;
  bad.scenarios[0].h = {};
  CHECK_THROWS_AS(solve_lshaped(bad, EngineConfig{}), std::invalid_argument);
}

TEST_CASE("relative complexities") {
  const TwoStageProblem p = random_problem({2, 2, 1, 12}, 5);
  const SolveReport multi = solve_lshaped(p, config("multi"));
  const SolveReport single = solve_lshaped(p, config("single"));
  const SolveReport partial = solve_lshaped(p, config("partial:T=4"));
  CHECK(compute_relative_complexities(multi, multi, single).rel_cut == 1.0);
  const auto s = compute_relative_complexities(single, multi, single);
  CHECK(s.rel_iter == 1.0);
  CHECK(s.rel_time == 1.0);
  const auto r = compute_relative_complexities(partial, multi, single);
  CHECK(r.rel_cut == static_cast<double>(partial.metrics.optimality_cuts) / multi.metrics.optimality_cuts);

  SolveReport fake = multi;
  fake.metrics.optimality_cuts = 50;
  SolveReport base = multi;
  base.metrics.optimality_cuts = 200;
  CHECK(compute_relative_complexities(fake, base, single).rel_cut == 0.25);

  SolveReport stuck = partial;
  stuck.status = SolveStatus::iteration_limit;
  CHECK_THROWS_AS(compute_relative_complexities(stuck, multi, single), std::invalid_argument);
}

TEST_CASE("status names") {
  CHECK(to_string(SolveStatus::converged) == "Converged");
  CHECK(to_string(SolveStatus::iteration_limit) == "IterationLimit");
  CHECK(to_string(SolveStatus::master_infeasible) == "MasterInfeasible");
}

TEST_CASE("tight tolerance on many scenarios") {
  // Ill-conditioned masters used to stop early with an inflated lower bound.
  const TwoStageProblem p = random_problem({3, 3, 2, 200}, 7);
  EngineConfig multi;
  multi.rel_tol = 1e-6;
  const double reference = solve_lshaped(p, multi).objective;
  EngineConfig partial = multi;
  partial.scheme = parse_scheme("partial:T=25");
  const SolveReport r = solve_lshaped(p, partial);
  REQUIRE(r.status == SolveStatus::converged);
  CHECK(std::abs(r.objective - reference) <= 2e-6 * std::abs(reference));
}

}
