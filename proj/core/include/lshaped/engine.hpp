#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lshaped/aggregation.hpp"
#include "lshaped/cuts.hpp"
#include "lshaped/problem.hpp"

namespace lshaped {

struct EngineConfig {
  double rel_tol = 1e-2;
  double violation_tol = kDefaultViolationTolerance;
  std::size_t max_iterations = 5000;
  std::size_t workers = 1;
  AggregationScheme scheme = MultiCut{};
  /// Mixed into the k-medoids tie-breaking seed.
  std::uint64_t seed = 0;
};

/// Empty when valid.
std::vector<std::string> validate_config(const EngineConfig& config, std::size_t N);

enum class SolveStatus { converged, iteration_limit, master_infeasible };

std::string to_string(SolveStatus status);

struct IterationRecord {
  std::size_t k = 0;
  std::vector<double> x;
  double lower = 0.0;  ///< -inf while some theta is uncovered
  double upper = 0.0;  ///< +inf on feasibility-cut iterations
  std::size_t cuts_added = 0;
  std::size_t cuts_skipped = 0;
  std::size_t feasibility_cuts = 0;
  std::vector<std::vector<std::size_t>> partition_used;

  bool operator==(const IterationRecord&) const = default;
};

struct SolveMetrics {
  std::size_t iterations = 0;       ///< N_I
  std::size_t optimality_cuts = 0;  ///< N_C, rows in the master at termination
  double seconds = 0.0;             ///< N_T
};

struct SolveReport {
  SolveStatus status = SolveStatus::iteration_limit;
  std::vector<double> x_star;
  double objective = 0.0;  ///< best upper bound; +inf if none was found
  std::vector<IterationRecord> history;
  SolveMetrics metrics;
  /// Master rows at termination, in insertion order.
  std::vector<OptimalityCut> optimality_cuts;
  std::vector<FeasibilityCut> feasibility_cuts;
};

struct SubproblemResult {
  bool feasible = false;
  double value = 0.0;            ///< Q_s(x), unweighted
  std::vector<double> duals;     ///< lambda with lambda'(h - T x) = value
  std::vector<double> farkas;    ///< sigma with sigma'W <= 0, sigma'(h - T x) > 0
};

/// min q_s'y s.t. W y = h_s - T_s x, y >= 0. Throws std::runtime_error if
/// the subproblem is unbounded.
SubproblemResult solve_subproblem(const TwoStageProblem& problem, std::size_t s, std::span<const double> x);

/// Runs the L-shaped method with the configured aggregation scheme.
/// Throws std::invalid_argument for invalid problems or configurations.
SolveReport solve_lshaped(const TwoStageProblem& problem, const EngineConfig& config);

struct RelativeComplexity {
  double rel_cut = 0.0;   ///< N_C / N_C(multi)
  double rel_iter = 0.0;  ///< N_I / N_I(single)
  double rel_time = 0.0;  ///< N_T / N_T(single)
};

/// Throws std::invalid_argument unless all three runs converged.
RelativeComplexity compute_relative_complexities(const SolveReport& run, const SolveReport& multi_baseline,
                                                 const SolveReport& single_baseline);

}  // namespace lshaped
