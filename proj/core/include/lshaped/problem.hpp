#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lshaped/lp.hpp"
#include "lshaped/matrix.hpp"

namespace lshaped {

/// Probability sums must be within this distance of one.
inline constexpr double kProbabilityTolerance = 1e-9;

/// min c'x  s.t.  A x = b,  x >= 0.
struct FirstStage {
  std::vector<double> c;
  Matrix A;  ///< p x n
  std::vector<double> b;

  std::size_t n() const { return c.size(); }
  std::size_t p() const { return b.size(); }

  bool operator==(const FirstStage&) const = default;
};

/// Scenario data of the recourse problem  min q'y  s.t.  W y = h - T x,  y >= 0.
struct Scenario {
  double probability = 0.0;
  std::vector<double> q;
  Matrix T;  ///< recourse rows x n
  std::vector<double> h;

  bool operator==(const Scenario&) const = default;
};

/// Finite two-stage stochastic LP with fixed recourse matrix W.
struct TwoStageProblem {
  std::string name;
  FirstStage first;
  Matrix W;  ///< recourse rows x m
  std::vector<Scenario> scenarios;

  std::size_t n() const { return first.n(); }
  std::size_t m() const { return W.cols(); }
  std::size_t recourse_rows() const { return W.rows(); }
  std::size_t num_scenarios() const { return scenarios.size(); }

  bool operator==(const TwoStageProblem&) const = default;
};

/// Which block of the scenario data a random entry overrides.
enum class RandomTarget { h, q, T };

std::string to_string(RandomTarget target);

struct Outcome {
  double value = 0.0;
  double probability = 0.0;

  bool operator==(const Outcome&) const = default;
};

/// Independent discrete random coordinate. For h only `row` is used, for q
/// only `col`.
struct RandomEntry {
  RandomTarget target = RandomTarget::h;
  std::size_t row = 0;
  std::size_t col = 0;
  std::vector<Outcome> outcomes;

  bool operator==(const RandomEntry&) const = default;
};

/// Deterministic skeleton plus independent discrete perturbations of the
/// second-stage data. W is never random.
struct StochasticTemplate {
  std::string name;
  FirstStage first;
  Matrix W;
  std::vector<double> q;
  Matrix T;
  std::vector<double> h;
  std::vector<RandomEntry> random;

  bool operator==(const StochasticTemplate&) const = default;
};

/// Every dimension and probability violation, one message each. Empty when
/// the problem is well formed.
std::vector<std::string> validate_problem(const TwoStageProblem& problem);
std::vector<std::string> validate_template(const StochasticTemplate& tmpl);

/// Rescales probabilities so they sum to one exactly when the sum is within
/// kProbabilityTolerance; throws std::invalid_argument otherwise.
void normalize_probabilities(TwoStageProblem& problem);

/// Deterministic equivalent over (x, y_1, ..., y_N), x first and then each
/// y_s in scenario order. Rows: A x = b, then T_s x + W y_s = h_s per
/// scenario. Throws std::invalid_argument for invalid problems.
LinearProgram build_extensive_form(const TwoStageProblem& problem);

/// c'x + sum_s pi_s q_s'y_s evaluated directly on problem data, for a point
/// laid out like the extensive form.
double extensive_objective(const TwoStageProblem& problem, std::span<const double> point);

inline constexpr std::size_t kDefaultScenarioCap = 1'000'000;

/// Cross product of the independent outcomes, ordered lexicographically by
/// outcome index with the first random entry most significant. Throws
/// std::length_error when the product exceeds `cap`.
TwoStageProblem enumerate_scenarios(const StochasticTemplate& tmpl,
                                    std::size_t cap = kDefaultScenarioCap);

/// N independent draws with weight 1/N each. Pure function of its inputs.
TwoStageProblem sample_instance(const StochasticTemplate& tmpl, std::size_t count,
                                std::uint64_t seed);

/// Parameters of the seeded complete-recourse generator used by tests and
/// benchmarks.
struct RandomProblemOptions {
  std::size_t decisions = 2;       ///< first-stage decision columns (a budget slack is appended)
  std::size_t recourse_rows = 2;   ///< rows of W
  std::size_t extra_recourse = 0;  ///< extra W columns beyond the [I, -I] block
  std::size_t scenarios = 10;
};

/// Random instance with complete recourse: W = [I, -I, extra] with positive
/// shortage/surplus penalties, a first-stage budget row, random T_s and h_s.
TwoStageProblem random_problem(const RandomProblemOptions& options, std::uint64_t seed);

}  // namespace lshaped
