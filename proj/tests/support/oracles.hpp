#pragma once

// Independent reference computations for tests. Nothing here calls the
// simplex code or the library's combinatorics.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lshaped/aggregation.hpp"
#include "lshaped/lp.hpp"
#include "lshaped/problem.hpp"

namespace oracle {

/// Optimal objective by enumerating every basic solution of
/// min c'x, A x = b, lower <= x <= upper (finite lower bounds; upper may be
/// infinite). Nonbasic columns sit at a finite bound. nullopt when no
/// basic solution is feasible. Exponential; meant for <= 10 variables.
std::optional<double> vertex_enumeration(const lshaped::LinearProgram& lp);

/// Counts of set partitions of {0..N-1} by block count, via restricted
/// growth strings. counts[k] = number of partitions into k blocks.
std::vector<std::uint64_t> partition_counts(std::size_t N);

/// All set partitions of {0..N-1}, each as a block label per element.
std::vector<std::vector<std::size_t>> all_partitions(std::size_t N);

/// Exhaustive k-medoids: the medoid set (ascending) with the smallest total
/// distance, ties to the lexicographically first set.
struct BruteMedoids {
  std::vector<std::size_t> medoids;
  double cost = 0.0;
};
BruteMedoids brute_force_kmedoids(const lshaped::Matrix& d, std::size_t k);

/// P1: min x + 0.5 max(2-x,0) + 0.5 max(4-x,0) over x >= 0.
double p1_objective(double x);
inline constexpr double kP1Optimum = 3.0;

/// The P1 fixture built in code.
lshaped::TwoStageProblem p1_problem();

/// Q_s(x) by direct enumeration of the subproblem's basic solutions.
std::optional<double> recourse_value(const lshaped::TwoStageProblem& p, std::size_t s,
                                     const std::vector<double>& x);

}  // namespace oracle
