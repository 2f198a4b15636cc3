#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lshaped/problem.hpp"

namespace lshaped {

/// grad' x + sum_{s in members} theta_s >= offset.
struct OptimalityCut {
  std::vector<double> grad;
  double offset = 0.0;
  /// Scenario indices, ascending and nonempty.
  std::vector<std::size_t> members;
  std::size_t iteration = 0;

  bool operator==(const OptimalityCut&) const = default;
};

/// grad' x >= offset, derived from a Farkas ray of one subproblem.
struct FeasibilityCut {
  std::vector<double> grad;
  double offset = 0.0;
  std::size_t scenario = 0;
  std::size_t iteration = 0;

  bool operator==(const FeasibilityCut&) const = default;
};

enum class DistanceMeasure { absolute, angular, spatioangular };

std::string to_string(DistanceMeasure measure);
/// Accepts "absolute", "angular", "spatioangular"; throws std::invalid_argument otherwise.
DistanceMeasure parse_distance_measure(const std::string& name);

/// Relative tolerance: a cut is violated when violation > tol * (1 + |offset|).
inline constexpr double kDefaultViolationTolerance = 1e-6;

/// (pi_s lambda' T_s, pi_s lambda' h_s) for scenario s.
OptimalityCut make_optimality_cut(std::size_t scenario, std::span<const double> lambda,
                                  const Scenario& data, std::size_t iteration = 0);

/// sigma' T_s x >= sigma' h_s. Requires sigma' W <= 0 (within 1e-9 relative
/// to |sigma|); throws std::invalid_argument otherwise.
FeasibilityCut make_feasibility_cut(std::size_t scenario, std::span<const double> sigma,
                                    const Scenario& data, const Matrix& W,
                                    std::size_t iteration = 0);

/// Sum of cuts with pairwise disjoint member sets. Terms are added in
/// ascending order of their smallest member so the floating-point result
/// does not depend on input order.
OptimalityCut aggregate(std::span<const OptimalityCut> cuts);

/// offset - grad' x - theta_sum.
double violation(const OptimalityCut& cut, std::span<const double> x, double theta_sum);

/// offset - grad' x - sum_{s in members} theta[s]. NaN entries mark missing
/// values and throw std::invalid_argument, as do out-of-range members.
double violation(const OptimalityCut& cut, std::span<const double> x,
                 std::span<const double> theta);

bool is_violated(double violation, double offset, double tol = kDefaultViolationTolerance);

/// Distance between cuts, with aggregates normalized by member count where
/// the measure is scale dependent. Throws std::invalid_argument when the
/// measure is undefined (zero gradient under angular measures, or two zero
/// cuts under the absolute measure).
double distance(const OptimalityCut& a, const OptimalityCut& b, DistanceMeasure measure);

/// distance() with the zero-gradient fallback used by the aggregation
/// rules: undefined angular comparisons fall back to the absolute measure,
/// and two all-zero cuts are at distance 0.
double robust_distance(const OptimalityCut& a, const OptimalityCut& b, DistanceMeasure measure);

}  // namespace lshaped
