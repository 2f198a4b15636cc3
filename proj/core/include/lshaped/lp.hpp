#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lshaped/matrix.hpp"

namespace lshaped {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Solver tolerances.
inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kOptimalityTolerance = 1e-9;
inline constexpr double kZeroPivotTolerance = 1e-11;
/// Consecutive degenerate pivots before Bland's rule takes over.
inline constexpr int kDegeneratePivotsBeforeBland = 50;

/// min c'x  s.t.  A x = rhs,  lower <= x <= upper.
///
/// Bounds may be infinite. Inequality rows are expressed through explicit
/// slack columns; LpBuilder adds them.
struct LinearProgram {
  std::vector<double> objective;
  Matrix A;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  LinearProgram() = default;
  /// All variables default to [0, +inf) with zero cost.
  LinearProgram(std::size_t rows, std::size_t vars);

  std::size_t num_rows() const { return rhs.size(); }
  std::size_t num_vars() const { return objective.size(); }

  /// Empty when consistent; otherwise one message per problem found.
  std::vector<std::string> check() const;
};

enum class RowSense { less_equal, equal, greater_equal };

/// Row-wise LP construction that turns inequalities into equalities with
/// nonnegative slack columns appended after the structural variables.
class LpBuilder {
 public:
  explicit LpBuilder(std::size_t structural_vars);

  void set_cost(std::size_t var, double cost);
  void set_bounds(std::size_t var, double lower, double upper);
  /// Returns the row index.
  std::size_t add_row(std::vector<double> coefficients, RowSense sense, double rhs);

  LinearProgram build() const;

 private:
  struct Row {
    std::vector<double> coefficients;
    RowSense sense;
    double rhs;
  };
  std::size_t vars_;
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Row> rows_;
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// Multipliers of the equality rows; filled only when optimal. The reduced
  /// cost of column j is c_j - duals' A_j.
  std::vector<double> duals;
  /// Infeasibility certificate sigma; filled only when infeasible. No point
  /// inside the variable bounds satisfies sigma' A x = sigma' rhs.
  std::vector<double> farkas;
  std::size_t iterations = 0;
};

struct LpOptions {
  /// 0 selects a size-dependent cap.
  std::size_t max_iterations = 0;
  /// Basis inverse is recomputed from scratch after this many pivots.
  std::size_t refactor_interval = 50;
  /// Equilibrate rows and columns by powers of two before solving; results
  /// are reported for the original problem either way.
  bool scale = true;
};

/// Two-phase bounded-variable revised simplex (dense).
///
/// Dantzig pricing switches to Bland's rule after a run of degenerate
/// pivots. The result is a deterministic function of the input. Throws
/// std::runtime_error when the iteration cap is reached and
/// std::invalid_argument on malformed input.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

struct KktReport {
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double complementarity = 0.0;

  double max() const;
};

/// Residuals of an optimal solution against the optimality conditions.
/// Throws std::invalid_argument unless sol.status is optimal.
KktReport verify_kkt(const LinearProgram& lp, const LpSolution& sol);

/// True when sigma proves that no x within the bounds satisfies A x = rhs,
/// i.e. the range of sigma' A x over the bounds misses sigma' rhs by more
/// than tol.
bool certifies_infeasibility(const LinearProgram& lp, std::span<const double> sigma,
                             double tol = kFeasibilityTolerance);

}  // namespace lshaped
