#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "lshaped/problem.hpp"
#include "lshaped/rng.hpp"
#include "oracles.hpp"

using namespace lshaped;

namespace {

bool contains(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

StochasticTemplate two_entry_template() {
  const TwoStageProblem p1 = oracle::p1_problem();
  StochasticTemplate t;
  t.first = p1.first;
  t.W = p1.W;
  t.q = {1.0, 0.0};
  t.T = Matrix{{1.0}};
  t.h = {3.0};
  t.random.push_back({RandomTarget::h, 0, 0, {{2.0, 0.5}, {4.0, 0.5}}});
  t.random.push_back({RandomTarget::q, 0, 0, {{1.0, 0.2}, {2.0, 0.3}, {3.0, 0.5}}});
  return t;
}

}  // namespace

TEST_SUITE("problem") {

TEST_CASE("validate_problem") {
  TwoStageProblem p = oracle::p1_problem();
  CHECK(validate_problem(p).empty());

  TwoStageProblem bad = p;
  bad.scenarios[1].probability = 0.4;
  CHECK(contains(validate_problem(bad), "probabilities sum to 0.9"));

  bad = p;
  bad.scenarios[0].T = Matrix{{1.0, 2.0}};
  CHECK(contains(validate_problem(bad), "T[0] has 2 columns, expected 1"));

  bad = p;
  bad.scenarios.clear();
  CHECK(contains(validate_problem(bad), "N >= 1 required"));

  bad = p;
  bad.scenarios[0].h[0] = std::nan("");
  CHECK_FALSE(validate_problem(bad).empty());
}

TEST_CASE("normalize_probabilities rescales within tolerance only") {
  TwoStageProblem p = oracle::p1_problem();
  p.scenarios[0].probability = 0.5 + 4e-10;
  normalize_probabilities(p);
  CHECK(p.scenarios[0].probability + p.scenarios[1].probability == doctest::Approx(1.0).epsilon(1e-15));
  p.scenarios[0].probability = 0.6;
  CHECK_THROWS_AS(normalize_probabilities(p), std::invalid_argument);
}

TEST_CASE("extensive form of P1") {
  const TwoStageProblem p = oracle::p1_problem();
  const LinearProgram lp = build_extensive_form(p);
  CHECK(lp.num_vars() == 1 + 2 * 2);
  CHECK(lp.num_rows() == 2);
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(oracle::kP1Optimum).epsilon(1e-12));
  CHECK(oracle::p1_objective(sol.x[0]) == doctest::Approx(oracle::kP1Optimum));
}

TEST_CASE("single-scenario extensive form is the merged LP") {
  TwoStageProblem p = random_problem({2, 2, 1, 1}, 9);
  const LinearProgram lp = build_extensive_form(p);
  const std::size_t n = p.n(), m = p.m(), r = p.recourse_rows();
  REQUIRE(lp.num_vars() == n + m);
  REQUIRE(lp.num_rows() == p.first.p() + r);
  for (std::size_t j = 0; j < n; ++j) CHECK(lp.objective[j] == p.first.c[j]);
  for (std::size_t j = 0; j < m; ++j) CHECK(lp.objective[n + j] == p.scenarios[0].q[j]);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n; ++j) CHECK(lp.A(p.first.p() + i, j) == p.scenarios[0].T(i, j));
    for (std::size_t j = 0; j < m; ++j) CHECK(lp.A(p.first.p() + i, n + j) == p.W(i, j));
    CHECK(lp.rhs[p.first.p() + i] == p.scenarios[0].h[i]);
  }
}

TEST_CASE("extensive objective matches direct evaluation") {
  Xorshift64Star rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const TwoStageProblem p = random_problem({3, 2, 1, 7}, 100 + trial);
    const LinearProgram lp = build_extensive_form(p);
    std::vector<double> point(lp.num_vars());
    for (double& v : point) v = rng.uniform(0.0, 5.0);
    double direct = dot(p.first.c, std::span<const double>(point).subspan(0, p.n()));
    for (std::size_t s = 0; s < p.num_scenarios(); ++s)
      direct += p.scenarios[s].probability *
                dot(p.scenarios[s].q, std::span<const double>(point).subspan(p.n() + s * p.m(), p.m()));
    CHECK(std::abs(dot(lp.objective, point) - direct) <= 1e-12 * (1.0 + std::abs(direct)));
    CHECK(std::abs(extensive_objective(p, point) - direct) <= 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("build_extensive_form rejects invalid problems") {
  TwoStageProblem p = oracle::p1_problem();
  p.scenarios[0].probability = 0.1;
  CHECK_THROWS_AS(build_extensive_form(p), std::invalid_argument);
}

TEST_CASE("enumerate_scenarios") {
  const StochasticTemplate t = two_entry_template();
  const TwoStageProblem p = enumerate_scenarios(t);
  REQUIRE(p.num_scenarios() == 6);
  double total = 0.0;
  for (const auto& s : p.scenarios) total += s.probability;
  CHECK(std::abs(total - 1.0) <= 1e-9);
  // First entry most significant.
  CHECK(p.scenarios[0].h[0] == 2.0);
  CHECK(p.scenarios[0].q[0] == 1.0);
  CHECK(p.scenarios[1].q[0] == 2.0);
  CHECK(p.scenarios[3].h[0] == 4.0);
  CHECK(p.scenarios[5].probability == doctest::Approx(0.25));
  CHECK(validate_problem(p).empty());

  SUBCASE("no random entries") {
    StochasticTemplate d = t;
    d.random.clear();
    const TwoStageProblem one = enumerate_scenarios(d);
    REQUIRE(one.num_scenarios() == 1);
    CHECK(one.scenarios[0].probability == 1.0);
    CHECK(one.scenarios[0].h == d.h);
    CHECK(one.scenarios[0].q == d.q);
    CHECK(one.scenarios[0].T == d.T);
  }
  SUBCASE("single entry") {
    StochasticTemplate d = t;
    d.random = {{RandomTarget::h, 0, 0, {{1.0, 0.3}, {2.0, 0.7}}}};
    const TwoStageProblem two = enumerate_scenarios(d);
    REQUIRE(two.num_scenarios() == 2);
    CHECK(two.scenarios[0].probability == doctest::Approx(0.3));
    CHECK(two.scenarios[1].probability == doctest::Approx(0.7));
  }
  SUBCASE("cap") {
    try {
      enumerate_scenarios(t, 5);
      FAIL("expected length_error");
    } catch (const std::length_error& e) {
      CHECK(std::string(e.what()).find("6") != std::string::npos);
    }
  }
}

TEST_CASE("enumerated probabilities sum to one") {
  Xorshift64Star rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    StochasticTemplate t = two_entry_template();
    t.random.clear();
    const std::size_t entries = 1 + rng.below(4);
    for (std::size_t e = 0; e < entries; ++e) {
      RandomEntry entry{e % 2 ? RandomTarget::q : RandomTarget::h, 0, e % 2, {}};
      const std::size_t k = 1 + rng.below(5);
      std::vector<double> w(k);
      double sum = 0.0;
      for (double& v : w) sum += (v = rng.uniform(0.1, 1.0));
      for (double v : w) entry.outcomes.push_back({rng.uniform(0.0, 5.0), v / sum});
      t.random.push_back(entry);
    }
    const TwoStageProblem p = enumerate_scenarios(t);
    double total = 0.0;
    for (const auto& s : p.scenarios) total += s.probability;
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
}

TEST_CASE("sample_instance") {
  const StochasticTemplate t = two_entry_template();
  const TwoStageProblem a = sample_instance(t, 5, 42);
  REQUIRE(a.num_scenarios() == 5);
  for (const auto& s : a.scenarios) CHECK(s.probability == 0.2);
  CHECK(a == sample_instance(t, 5, 42));
  CHECK(validate_problem(a).empty());

  StochasticTemplate fixed = t;
  fixed.random = {{RandomTarget::h, 0, 0, {{7.0, 1.0}}}};
  const TwoStageProblem c = sample_instance(fixed, 3, 1);
  CHECK(c.scenarios[0] == c.scenarios[1]);
  CHECK(c.scenarios[1] == c.scenarios[2]);
  CHECK(c.scenarios[0].h[0] == 7.0);

  // Both outcomes of a fair coin show up in a modest sample.
  const TwoStageProblem big = sample_instance(t, 200, 3);
  const auto low = std::count_if(big.scenarios.begin(), big.scenarios.end(), [](const Scenario& s) { return s.h[0] == 2.0; });
  CHECK(low > 60);
  CHECK(low < 140);
}

TEST_CASE("random_problem has complete recourse") {
  const TwoStageProblem p = random_problem({3, 4, 2, 20}, 8);
  CHECK(validate_problem(p).empty());
  CHECK(p.n() == 4);
  CHECK(p.m() == 10);
  CHECK(p == random_problem({3, 4, 2, 20}, 8));
  const LpSolution sol = solve_lp(build_extensive_form(p));
  CHECK(sol.status == LpStatus::optimal);
}

}
