#include "lshaped/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace lshaped {

LinearProgram::LinearProgram(std::size_t rows, std::size_t vars)
    : objective(vars, 0.0),
      A(rows, vars),
      rhs(rows, 0.0),
      lower(vars, 0.0),
      upper(vars, kInfinity) {}

std::vector<std::string> LinearProgram::check() const {
  std::vector<std::string> problems;
  const std::size_t n = objective.size();
  if (A.rows() != rhs.size())
    problems.push_back("A has " + std::to_string(A.rows()) + " rows but rhs has " +
                       std::to_string(rhs.size()));
  if (A.cols() != n && !(A.rows() == 0))
    problems.push_back("A has " + std::to_string(A.cols()) + " columns but there are " +
                       std::to_string(n) + " variables");
  if (lower.size() != n || upper.size() != n)
    problems.push_back("bound vectors do not match the variable count");
  for (double v : objective)
    if (!std::isfinite(v)) {
      problems.push_back("objective has a non-finite entry");
      break;
    }
  for (double v : rhs)
    if (!std::isfinite(v)) {
      problems.push_back("rhs has a non-finite entry");
      break;
    }
  for (double v : A.data())
    if (!std::isfinite(v)) {
      problems.push_back("A has a non-finite entry");
      break;
    }
  for (std::size_t j = 0; j < std::min({n, lower.size(), upper.size()}); ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
        lower[j] == kInfinity || upper[j] == -kInfinity) {
      problems.push_back("variable " + std::to_string(j) + " has inconsistent bounds");
      break;
    }
  }
  return problems;
}

LpBuilder::LpBuilder(std::size_t structural_vars)
    : vars_(structural_vars),
      cost_(structural_vars, 0.0),
      lower_(structural_vars, 0.0),
      upper_(structural_vars, kInfinity) {}

void LpBuilder::set_cost(std::size_t var, double cost) { cost_.at(var) = cost; }

void LpBuilder::set_bounds(std::size_t var, double lower, double upper) {
  lower_.at(var) = lower;
  upper_.at(var) = upper;
}

std::size_t LpBuilder::add_row(std::vector<double> coefficients, RowSense sense, double rhs) {
  if (coefficients.size() != vars_)
    throw std::invalid_argument("LpBuilder::add_row: expected " + std::to_string(vars_) +
                                " coefficients");
  rows_.push_back({std::move(coefficients), sense, rhs});
  return rows_.size() - 1;
}

LinearProgram LpBuilder::build() const {
  std::size_t slacks = 0;
  for (const auto& r : rows_)
    if (r.sense != RowSense::equal) ++slacks;
  LinearProgram lp(rows_.size(), vars_ + slacks);
  std::copy(cost_.begin(), cost_.end(), lp.objective.begin());
  std::copy(lower_.begin(), lower_.end(), lp.lower.begin());
  std::copy(upper_.begin(), upper_.end(), lp.upper.begin());
  std::size_t slack = vars_;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    std::copy(r.coefficients.begin(), r.coefficients.end(), lp.A.row(i).begin());
    lp.rhs[i] = r.rhs;
    if (r.sense == RowSense::less_equal) lp.A(i, slack++) = 1.0;
    if (r.sense == RowSense::greater_equal) lp.A(i, slack++) = -1.0;
  }
  return lp;
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

double KktReport::max() const { return std::max({primal_residual, dual_residual, complementarity}); }

namespace {

enum class VarState : std::uint8_t { basic, at_lower, at_upper, free_zero };

class BoundedSimplex {
 public:
  BoundedSimplex(const LinearProgram& lp, const LpOptions& options);
  LpSolution run();

 private:
  enum class PhaseResult { optimal, unbounded };

  PhaseResult iterate(const Eigen::VectorXd& cost);
  int select_entering(const Eigen::VectorXd& reduced) const;
  void refactor();
  Eigen::VectorXd basic_costs(const Eigen::VectorXd& cost) const;
  bool is_fixed(int j) const { return lo_(j) == up_(j); }

  const LinearProgram& lp_;
  LpOptions options_;
  int rows_ = 0;
  int structural_ = 0;
  int total_ = 0;

  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::VectorXd lo_;
  Eigen::VectorXd up_;
  Eigen::VectorXd x_;
  Eigen::MatrixXd binv_;
  std::vector<int> basis_;
  std::vector<VarState> state_;

  std::size_t iterations_ = 0;
  std::size_t max_iterations_ = 0;
  std::size_t since_refactor_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
};

BoundedSimplex::BoundedSimplex(const LinearProgram& lp, const LpOptions& options)
    : lp_(lp), options_(options) {
  rows_ = static_cast<int>(lp.num_rows());
  structural_ = static_cast<int>(lp.num_vars());
  total_ = structural_ + rows_;

  a_ = Eigen::MatrixXd::Zero(rows_, total_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < structural_; ++j) a_(i, j) = lp.A(i, j);
  b_ = Eigen::Map<const Eigen::VectorXd>(lp.rhs.data(), rows_);

  lo_.resize(total_);
  up_.resize(total_);
  x_ = Eigen::VectorXd::Zero(total_);
  state_.assign(total_, VarState::at_lower);
  for (int j = 0; j < structural_; ++j) {
    lo_(j) = lp.lower[j];
    up_(j) = lp.upper[j];
    if (std::isfinite(lo_(j))) {
      x_(j) = lo_(j);
      state_[j] = VarState::at_lower;
    } else if (std::isfinite(up_(j))) {
      x_(j) = up_(j);
      state_[j] = VarState::at_upper;
    } else {
      x_(j) = 0.0;
      state_[j] = VarState::free_zero;
    }
  }

  // Artificial basis: one signed unit column per row absorbs the residual.
  const Eigen::VectorXd residual = b_ - a_.leftCols(structural_) * x_.head(structural_);
  basis_.resize(rows_);
  binv_ = Eigen::MatrixXd::Zero(rows_, rows_);
  for (int i = 0; i < rows_; ++i) {
    const int art = structural_ + i;
    const double sign = residual(i) >= 0.0 ? 1.0 : -1.0;
    a_(i, art) = sign;
    binv_(i, i) = sign;
    lo_(art) = 0.0;
    up_(art) = kInfinity;
    x_(art) = std::abs(residual(i));
    state_[art] = VarState::basic;
    basis_[i] = art;
  }

  max_iterations_ = options_.max_iterations != 0
                        ? options_.max_iterations
                        : std::max<std::size_t>(20000, 100 * static_cast<std::size_t>(rows_ + total_));
}

Eigen::VectorXd BoundedSimplex::basic_costs(const Eigen::VectorXd& cost) const {
  Eigen::VectorXd cb(rows_);
  for (int i = 0; i < rows_; ++i) cb(i) = cost(basis_[i]);
  return cb;
}

void BoundedSimplex::refactor() {
  if (rows_ > 0) {
    Eigen::MatrixXd basis_matrix(rows_, rows_);
    for (int i = 0; i < rows_; ++i) basis_matrix.col(i) = a_.col(basis_[i]);
    binv_ = basis_matrix.partialPivLu().inverse();
    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < total_; ++j)
      if (state_[j] != VarState::basic && x_(j) != 0.0) rhs -= a_.col(j) * x_(j);
    const Eigen::VectorXd xb = binv_ * rhs;
    for (int i = 0; i < rows_; ++i) x_(basis_[i]) = xb(i);
  }
  since_refactor_ = 0;
}

int BoundedSimplex::select_entering(const Eigen::VectorXd& reduced) const {
  int best = -1;
  double best_score = 0.0;
  for (int j = 0; j < total_; ++j) {
    const VarState s = state_[j];
    if (s == VarState::basic || is_fixed(j)) continue;
    const double d = reduced(j);
    bool eligible = false;
    switch (s) {
      case VarState::at_lower: eligible = d < -kOptimalityTolerance; break;
      case VarState::at_upper: eligible = d > kOptimalityTolerance; break;
      case VarState::free_zero: eligible = std::abs(d) > kOptimalityTolerance; break;
      case VarState::basic: break;
    }
    if (!eligible) continue;
    if (bland_) return j;
    if (std::abs(d) > best_score) {
      best_score = std::abs(d);
      best = j;
    }
  }
  return best;
}

BoundedSimplex::PhaseResult BoundedSimplex::iterate(const Eigen::VectorXd& cost) {
  degenerate_run_ = 0;
  bland_ = false;
  for (;;) {
    if (iterations_ >= max_iterations_)
      throw std::runtime_error("simplex iteration limit reached (" + std::to_string(iterations_) +
                               " iterations)");

    const Eigen::VectorXd y = binv_.transpose() * basic_costs(cost);
    const Eigen::VectorXd reduced = cost - a_.transpose() * y;
    const int q = select_entering(reduced);
    if (q < 0) return PhaseResult::optimal;
    ++iterations_;

    const double dir = reduced(q) < 0.0 ? 1.0 : -1.0;
    const Eigen::VectorXd alpha = binv_ * a_.col(q);
    const double alpha_scale = std::max(1.0, alpha.cwiseAbs().maxCoeff());
    const double pivot_floor = kZeroPivotTolerance * alpha_scale;

    // Entering variable's own range permits a bound flip.
    const double flip = std::isfinite(lo_(q)) && std::isfinite(up_(q)) ? up_(q) - lo_(q) : kInfinity;

    // Harris pass 1: largest step that keeps every basic variable within its
    // bounds relaxed by the feasibility tolerance.
    double relaxed = kInfinity;
    for (int i = 0; i < rows_; ++i) {
      if (std::abs(alpha(i)) <= pivot_floor) continue;
      const int bv = basis_[i];
      const double rate = -dir * alpha(i);
      // Basics that drifted past a bound block at once rather than giving a negative step.
      if (rate < 0.0 && std::isfinite(lo_(bv)))
        relaxed = std::min(relaxed, (std::max(0.0, x_(bv) - lo_(bv)) + kFeasibilityTolerance) / -rate);
      else if (rate > 0.0 && std::isfinite(up_(bv)))
        relaxed = std::min(relaxed, (std::max(0.0, up_(bv) - x_(bv)) + kFeasibilityTolerance) / rate);
    }

    int leave = -1;
    double step = kInfinity;
    if (bland_) {
      // Exact minimum ratio; ties go to the smallest basic variable index.
      int leave_var = total_;
      for (int i = 0; i < rows_; ++i) {
        if (std::abs(alpha(i)) <= pivot_floor) continue;
        const int bv = basis_[i];
        const double rate = -dir * alpha(i);
        double ratio = kInfinity;
        if (rate < 0.0 && std::isfinite(lo_(bv))) ratio = std::max(0.0, x_(bv) - lo_(bv)) / -rate;
        if (rate > 0.0 && std::isfinite(up_(bv))) ratio = std::max(0.0, up_(bv) - x_(bv)) / rate;
        if (!std::isfinite(ratio)) continue;
        const double tie = 1e-12 * (1.0 + std::abs(step));
        if (ratio < step - tie || (ratio <= step + tie && bv < leave_var)) {
          step = ratio;
          leave = i;
          leave_var = bv;
        }
      }
    } else if (std::isfinite(relaxed)) {
      // Harris pass 2: among rows blocking within the relaxed step, take the
      // largest pivot magnitude.
      double best_pivot = 0.0;
      for (int i = 0; i < rows_; ++i) {
        if (std::abs(alpha(i)) <= pivot_floor) continue;
        const int bv = basis_[i];
        const double rate = -dir * alpha(i);
        double ratio = kInfinity;
        if (rate < 0.0 && std::isfinite(lo_(bv))) ratio = std::max(0.0, x_(bv) - lo_(bv)) / -rate;
        if (rate > 0.0 && std::isfinite(up_(bv))) ratio = std::max(0.0, up_(bv) - x_(bv)) / rate;
        if (ratio <= relaxed && std::abs(alpha(i)) > best_pivot) {
          best_pivot = std::abs(alpha(i));
          leave = i;
          step = ratio;
        }
      }
    }

    if (flip <= step) {
      step = flip;
      leave = -1;
    }
    if (!std::isfinite(step)) return PhaseResult::unbounded;

    x_(q) += dir * step;
    for (int i = 0; i < rows_; ++i) x_(basis_[i]) -= dir * step * alpha(i);

    if (step <= 1e-12) {
      if (++degenerate_run_ >= kDegeneratePivotsBeforeBland) bland_ = true;
    } else {
      degenerate_run_ = 0;
      bland_ = false;
    }

    if (leave < 0) {
      // Bound flip, basis unchanged.
      if (dir > 0.0) {
        state_[q] = VarState::at_upper;
        x_(q) = up_(q);
      } else {
        state_[q] = VarState::at_lower;
        x_(q) = lo_(q);
      }
      continue;
    }

    const int out = basis_[leave];
    const double rate = -dir * alpha(leave);
    if (rate < 0.0 || is_fixed(out)) {
      state_[out] = VarState::at_lower;
      x_(out) = lo_(out);
    } else {
      state_[out] = VarState::at_upper;
      x_(out) = up_(out);
    }
    state_[q] = VarState::basic;
    basis_[leave] = q;

    const double pivot = alpha(leave);
    const Eigen::RowVectorXd pivot_row = binv_.row(leave) / pivot;
    binv_.noalias() -= alpha * pivot_row;
    binv_.row(leave) = pivot_row;

    if (++since_refactor_ >= options_.refactor_interval) refactor();
  }
}

LpSolution BoundedSimplex::run() {
  LpSolution sol;

  // Phase 1: drive the artificial columns to zero.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total_);
  phase1.tail(rows_).setOnes();
  if (iterate(phase1) == PhaseResult::unbounded)
    throw std::logic_error("simplex phase 1 reported an unbounded direction");
  refactor();

  double infeasibility = 0.0;
  for (int i = 0; i < rows_; ++i) infeasibility += std::max(0.0, x_(structural_ + i));
  const double b_scale = rows_ > 0 ? std::max(1.0, b_.cwiseAbs().maxCoeff()) : 1.0;
  if (infeasibility > kFeasibilityTolerance * b_scale) {
    const Eigen::VectorXd y = binv_.transpose() * basic_costs(phase1);
    sol.status = LpStatus::infeasible;
    sol.farkas.assign(y.data(), y.data() + rows_);
    sol.iterations = iterations_;
    return sol;
  }

  // Phase 2: artificials are fixed at zero and keep any redundant rows basic.
  for (int i = 0; i < rows_; ++i) {
    const int art = structural_ + i;
    up_(art) = 0.0;
    if (state_[art] != VarState::basic) {
      state_[art] = VarState::at_lower;
      x_(art) = 0.0;
    }
  }
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(total_);
  for (int j = 0; j < structural_; ++j) cost(j) = lp_.objective[j];

  const PhaseResult result = iterate(cost);
  sol.iterations = iterations_;
  if (result == PhaseResult::unbounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }
  refactor();

  sol.status = LpStatus::optimal;
  sol.x.assign(x_.data(), x_.data() + structural_);
  // Snap values within tolerance of a bound onto the bound.
  for (int j = 0; j < structural_; ++j) {
    if (std::isfinite(lo_(j)) && std::abs(sol.x[j] - lo_(j)) <= kFeasibilityTolerance * 1e-3)
      sol.x[j] = lo_(j);
    if (std::isfinite(up_(j)) && std::abs(sol.x[j] - up_(j)) <= kFeasibilityTolerance * 1e-3)
      sol.x[j] = up_(j);
  }
  const Eigen::VectorXd y = binv_.transpose() * basic_costs(cost);
  sol.duals.assign(y.data(), y.data() + rows_);
  sol.objective = 0.0;
  for (int j = 0; j < structural_; ++j) sol.objective += lp_.objective[j] * sol.x[j];
  return sol;
}

// Geometric-mean scaling, a few alternating passes. Factors are powers of two
// so scaling and unscaling are exact.
struct Scaling {
  std::vector<double> row;
  std::vector<double> col;
};

double power_of_two_near(double v) { return std::exp2(std::round(std::log2(v))); }

Scaling equilibrate(const LinearProgram& lp) {
  const std::size_t m = lp.num_rows();
  const std::size_t n = lp.num_vars();
  Scaling sc{std::vector<double>(m, 1.0), std::vector<double>(n, 1.0)};
  for (int pass = 0; pass < 4; ++pass) {
    for (std::size_t i = 0; i < m; ++i) {
      double lo = kInfinity, hi = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double a = std::abs(lp.A(i, j)) * sc.col[j];
        if (a == 0.0) continue;
        lo = std::min(lo, a);
        hi = std::max(hi, a);
      }
      if (hi > 0.0) sc.row[i] = power_of_two_near(1.0 / std::sqrt(lo * hi));
    }
    for (std::size_t j = 0; j < n; ++j) {
      double lo = kInfinity, hi = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double a = std::abs(lp.A(i, j)) * sc.row[i];
        if (a == 0.0) continue;
        lo = std::min(lo, a);
        hi = std::max(hi, a);
      }
      if (hi > 0.0) sc.col[j] = power_of_two_near(1.0 / std::sqrt(lo * hi));
    }
  }
  return sc;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  if (const auto problems = lp.check(); !problems.empty())
    throw std::invalid_argument("solve_lp: malformed LP: " + problems.front());
  if (!options.scale || lp.num_rows() == 0) {
    BoundedSimplex simplex(lp, options);
    return simplex.run();
  }

  const Scaling sc = equilibrate(lp);
  LinearProgram scaled = lp;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    scaled.rhs[i] *= sc.row[i];
    for (std::size_t j = 0; j < lp.num_vars(); ++j) scaled.A(i, j) *= sc.row[i] * sc.col[j];
  }
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    scaled.objective[j] *= sc.col[j];
    scaled.lower[j] /= sc.col[j];
    scaled.upper[j] /= sc.col[j];
  }
  BoundedSimplex simplex(scaled, options);
  LpSolution sol = simplex.run();
  for (std::size_t j = 0; j < sol.x.size(); ++j) sol.x[j] *= sc.col[j];
  for (std::size_t i = 0; i < sol.duals.size(); ++i) sol.duals[i] *= sc.row[i];
  for (std::size_t i = 0; i < sol.farkas.size(); ++i) sol.farkas[i] *= sc.row[i];
  if (sol.status == LpStatus::optimal) {
    sol.objective = 0.0;
    for (std::size_t j = 0; j < sol.x.size(); ++j) sol.objective += lp.objective[j] * sol.x[j];
  }
  return sol;
}

KktReport verify_kkt(const LinearProgram& lp, const LpSolution& sol) {
  if (sol.status != LpStatus::optimal)
    throw std::invalid_argument("verify_kkt: solution is not optimal");
  const std::size_t n = lp.num_vars();
  const std::size_t m = lp.num_rows();
  if (sol.x.size() != n || sol.duals.size() != m)
    throw std::invalid_argument("verify_kkt: solution dimensions do not match the LP");

  KktReport report;
  const std::vector<double> ax = m > 0 ? lp.A.multiply(sol.x) : std::vector<double>{};
  for (std::size_t i = 0; i < m; ++i)
    report.primal_residual = std::max(report.primal_residual, std::abs(ax[i] - lp.rhs[i]));
  for (std::size_t j = 0; j < n; ++j) {
    report.primal_residual = std::max(report.primal_residual, lp.lower[j] - sol.x[j]);
    report.primal_residual = std::max(report.primal_residual, sol.x[j] - lp.upper[j]);
  }

  const std::vector<double> aty =
      m > 0 ? lp.A.multiply_transposed(sol.duals) : std::vector<double>(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double d = lp.objective[j] - aty[j];
    if (lp.lower[j] == lp.upper[j]) continue;
    if (d > 0.0) {
      // Must sit at the lower bound.
      if (!std::isfinite(lp.lower[j]))
        report.dual_residual = std::max(report.dual_residual, d);
      else
        report.complementarity = std::max(report.complementarity, d * (sol.x[j] - lp.lower[j]));
    } else if (d < 0.0) {
      if (!std::isfinite(lp.upper[j]))
        report.dual_residual = std::max(report.dual_residual, -d);
      else
        report.complementarity = std::max(report.complementarity, -d * (lp.upper[j] - sol.x[j]));
    }
  }
  return report;
}

bool certifies_infeasibility(const LinearProgram& lp, std::span<const double> sigma, double tol) {
  const std::size_t n = lp.num_vars();
  if (sigma.size() != lp.num_rows()) return false;
  const std::vector<double> coeff =
      lp.num_rows() > 0 ? lp.A.multiply_transposed(sigma) : std::vector<double>(n, 0.0);
  const double target = dot(sigma, lp.rhs);
  double sup = 0.0;
  double inf = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::abs(coeff[j]) <= tol ? 0.0 : coeff[j];
    if (a == 0.0) continue;
    const double hi = a > 0.0 ? a * lp.upper[j] : a * lp.lower[j];
    const double lo = a > 0.0 ? a * lp.lower[j] : a * lp.upper[j];
    sup += hi;
    inf += lo;
  }
  return sup < target - tol || inf > target + tol;
}

}  // namespace lshaped
