#pragma once

#include <cstddef>
#include <vector>

#include "lshaped/problem.hpp"

namespace lshaped::detail {

// Master problem of the reformulated L-shaped method:
//
//   min c'x + sum_{t covered} theta_t
//   s.t. A x = b,  x >= 0
//        grad_r' x + sum_{t in slots(r)} theta_t >= offset_r   (optimality rows)
//        grad_f' x >= offset_f                                 (feasibility rows)
//
// Each solve works on the LP dual, whose basis has n + |covered| rows no
// matter how many cuts accumulate; x and theta are read back from its
// equality-row multipliers.
class Master {
 public:
  Master(const FirstStage& first, std::size_t slots);

  void add_optimality(const std::vector<double>& grad, double offset, std::vector<std::size_t> slots);
  void add_feasibility(const std::vector<double>& grad, double offset);

  bool covered(std::size_t slot) const { return covered_[slot]; }
  bool all_covered() const { return covered_count_ == covered_.size(); }
  std::size_t slots() const { return covered_.size(); }
  std::size_t optimality_rows() const { return opt_.size(); }

  struct Result {
    bool feasible = false;
    std::vector<double> x;
    std::vector<double> theta;  // NaN for uncovered slots
    double objective = 0.0;     // c'x + sum of covered theta
  };

  /// Throws std::runtime_error when the master is unbounded.
  Result solve() const;

 private:
  struct Row {
    std::vector<double> grad;
    double offset;
    std::vector<std::size_t> slots;
  };

  bool first_stage_feasible() const;

  const FirstStage& first_;
  std::vector<bool> covered_;
  std::size_t covered_count_ = 0;
  std::vector<Row> opt_;
  std::vector<Row> feas_;
};

}  // namespace lshaped::detail
