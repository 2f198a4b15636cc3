#include "master.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace lshaped::detail {

Master::Master(const FirstStage& first, std::size_t slots) : first_(first), covered_(slots, false) {}

void Master::add_optimality(const std::vector<double>& grad, double offset, std::vector<std::size_t> slots) {
  if (grad.size() != first_.n()) throw std::invalid_argument("master: cut gradient has the wrong length");
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  for (std::size_t t : slots) {
    if (t >= covered_.size()) throw std::invalid_argument("master: theta index out of range");
    if (!covered_[t]) {
      covered_[t] = true;
      ++covered_count_;
    }
  }
  opt_.push_back({grad, offset, std::move(slots)});
}

void Master::add_feasibility(const std::vector<double>& grad, double offset) {
  if (grad.size() != first_.n()) throw std::invalid_argument("master: cut gradient has the wrong length");
  feas_.push_back({grad, offset, {}});
}

bool Master::first_stage_feasible() const {
  const std::size_t n = first_.n();
  LpBuilder b(n);
  for (std::size_t i = 0; i < first_.p(); ++i) {
    auto r = first_.A.row(i);
    b.add_row({r.begin(), r.end()}, RowSense::equal, first_.b[i]);
  }
  for (const Row& f : feas_) b.add_row(f.grad, RowSense::greater_equal, f.offset);
  return solve_lp(b.build()).status != LpStatus::infeasible;
}

Master::Result Master::solve() const {
  const std::size_t n = first_.n();
  const std::size_t p = first_.p();
  const std::size_t R = opt_.size();
  const std::size_t F = feas_.size();

  // Covered thetas that appear in exactly the same rows have identical
  // columns, so each such group is one master variable. This keeps the dual
  // free of repeated rows (all N rows coincide under single-cut aggregation).
  std::vector<std::vector<std::size_t>> pattern(covered_.size());
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t t : opt_[r].slots) pattern[t].push_back(r);
  std::map<std::vector<std::size_t>, std::size_t> group_of_pattern;
  std::vector<std::size_t> group(covered_.size(), 0);
  std::vector<std::size_t> group_size;
  for (std::size_t t = 0; t < covered_.size(); ++t) {
    if (!covered_[t]) continue;
    auto [it, fresh] = group_of_pattern.try_emplace(pattern[t], group_size.size());
    if (fresh) group_size.push_back(0);
    group[t] = it->second;
    ++group_size[it->second];
  }
  const std::size_t C = group_size.size();
  std::vector<std::size_t> theta_row(covered_.size(), 0);
  for (std::size_t t = 0; t < covered_.size(); ++t) theta_row[t] = n + group[t];

  // Dual in minimization form over (u, v, w, s):
  //   min -b'u - g'v - d'w
  //   A'u + G'v + D'w + s = c      (one row per x_j)
  //   sum_{r covers g} v_r = 1     (one row per theta group g)
  //   u free, v, w, s >= 0
  const std::size_t cols = p + R + F + n;
  LinearProgram lp(n + C, cols);
  for (std::size_t j = 0; j < n; ++j) lp.rhs[j] = first_.c[j];
  for (std::size_t t = 0; t < C; ++t) lp.rhs[n + t] = 1.0;
  for (std::size_t i = 0; i < p; ++i) {
    lp.objective[i] = -first_.b[i];
    lp.lower[i] = -kInfinity;
    for (std::size_t j = 0; j < n; ++j) lp.A(j, i) = first_.A(i, j);
  }
  for (std::size_t r = 0; r < R; ++r) {
    const std::size_t col = p + r;
    lp.objective[col] = -opt_[r].offset;
    for (std::size_t j = 0; j < n; ++j) lp.A(j, col) = opt_[r].grad[j];
    for (std::size_t t : opt_[r].slots) lp.A(theta_row[t], col) = 1.0;
  }
  for (std::size_t f = 0; f < F; ++f) {
    const std::size_t col = p + R + f;
    lp.objective[col] = -feas_[f].offset;
    for (std::size_t j = 0; j < n; ++j) lp.A(j, col) = feas_[f].grad[j];
  }
  for (std::size_t j = 0; j < n; ++j) lp.A(j, p + R + F + j) = 1.0;

  const LpSolution sol = solve_lp(lp);
  Result out;
  if (sol.status == LpStatus::unbounded) return out;
  if (sol.status == LpStatus::infeasible) {
    if (!first_stage_feasible()) return out;
    throw std::runtime_error("master problem is unbounded (first-stage costs are unbounded below)");
  }

  out.feasible = true;
  out.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.x[j] = std::max(0.0, -sol.duals[j]);
  out.theta.assign(covered_.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t t = 0; t < covered_.size(); ++t)
    if (covered_[t]) out.theta[t] = -sol.duals[theta_row[t]] / static_cast<double>(group_size[group[t]]);
  out.objective = -sol.objective;
  return out;
}

}  // namespace lshaped::detail
