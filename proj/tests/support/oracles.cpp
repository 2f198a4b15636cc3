#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace oracle {

namespace {

// Solves M z = r in place by Gaussian elimination with partial pivoting.
// Returns false for (numerically) singular M.
bool gauss_solve(std::vector<std::vector<double>> M, std::vector<double> r, std::vector<double>& z) {
  const std::size_t n = r.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(M[i][col]) > std::abs(M[piv][col])) piv = i;
    if (std::abs(M[piv][col]) < 1e-10) return false;
    std::swap(M[piv], M[col]);
    std::swap(r[piv], r[col]);
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = M[i][col] / M[col][col];
      for (std::size_t j = col; j < n; ++j) M[i][j] -= f * M[col][j];
      r[i] -= f * r[col];
    }
  }
  z.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = r[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= M[i][j] * z[j];
    z[i] = s / M[i][i];
  }
  return true;
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::optional<double> vertex_enumeration(const lshaped::LinearProgram& lp) {
  const std::size_t r = lp.num_rows();
  const std::size_t n = lp.num_vars();
  std::optional<double> best;
  if (r == 0) {
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double lo = lp.lower[j], up = lp.upper[j];
      const double c = lp.objective[j];
      if (c < 0 && !std::isfinite(up)) return std::nullopt;
      obj += c * (c < 0 ? up : lo);
    }
    return obj;
  }
  for_each_subset(n, r, [&](const std::vector<std::size_t>& basis) {
    std::vector<std::size_t> nonbasic;
    for (std::size_t j = 0, b = 0; j < n; ++j) {
      if (b < r && basis[b] == j) ++b;
      else nonbasic.push_back(j);
    }
    std::vector<std::vector<double>> B(r, std::vector<double>(r));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < r; ++k) B[i][k] = lp.A(i, basis[k]);
    const std::size_t combos = std::size_t{1} << nonbasic.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
      std::vector<double> x(n, 0.0);
      bool ok = true;
      for (std::size_t t = 0; t < nonbasic.size(); ++t) {
        const std::size_t j = nonbasic[t];
        const bool at_upper = (mask >> t) & 1;
        const double v = at_upper ? lp.upper[j] : lp.lower[j];
        if (!std::isfinite(v)) {
          ok = false;
          break;
        }
        x[j] = v;
      }
      if (!ok) continue;
      std::vector<double> rhs(r);
      for (std::size_t i = 0; i < r; ++i) {
        double s = lp.rhs[i];
        for (std::size_t j : nonbasic) s -= lp.A(i, j) * x[j];
        rhs[i] = s;
      }
      std::vector<double> z;
      if (!gauss_solve(B, rhs, z)) return;
      for (std::size_t k = 0; k < r; ++k) {
        const std::size_t j = basis[k];
        if (z[k] < lp.lower[j] - 1e-9 || z[k] > lp.upper[j] + 1e-9) ok = false;
        x[j] = z[k];
      }
      if (!ok) continue;
      double obj = 0.0;
      for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
      if (!best || obj < *best) best = obj;
    }
  });
  return best;
}

std::vector<std::vector<std::size_t>> all_partitions(std::size_t N) {
  std::vector<std::vector<std::size_t>> out;
  if (N == 0) {
    out.push_back({});
    return out;
  }
  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<std::size_t> a(N, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t mx) {
    if (i == N) {
      out.push_back(a);
      return;
    }
    for (std::size_t v = 0; v <= mx + 1; ++v) {
      a[i] = v;
      rec(i + 1, std::max(mx, v));
    }
  };
  a[0] = 0;
  rec(1, 0);
  return out;
}

std::vector<std::uint64_t> partition_counts(std::size_t N) {
  std::vector<std::uint64_t> counts(N + 1, 0);
  for (const auto& p : all_partitions(N)) {
    std::size_t blocks = 0;
    for (std::size_t v : p) blocks = std::max(blocks, v + 1);
    ++counts[blocks];
  }
  return counts;
}

BruteMedoids brute_force_kmedoids(const lshaped::Matrix& d, std::size_t k) {
  BruteMedoids best;
  best.cost = std::numeric_limits<double>::infinity();
  const std::size_t n = d.rows();
  for_each_subset(n, k, [&](const std::vector<std::size_t>& med) {
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t c : med) m = std::min(m, d(c, i));
      cost += m;
    }
    if (cost < best.cost) {
      best.cost = cost;
      best.medoids = med;
    }
  });
  return best;
}

double p1_objective(double x) { return x + 0.5 * std::max(2.0 - x, 0.0) + 0.5 * std::max(4.0 - x, 0.0); }

lshaped::TwoStageProblem p1_problem() {
  lshaped::TwoStageProblem p;
  p.name = "P1";
  p.first.c = {1.0};
  p.first.A = lshaped::Matrix(0, 1);
  p.W = lshaped::Matrix{{1.0, -1.0}};
  for (double h : {2.0, 4.0}) {
    lshaped::Scenario s;
    s.probability = 0.5;
    s.q = {1.0, 0.0};
    s.T = lshaped::Matrix{{1.0}};
    s.h = {h};
    p.scenarios.push_back(s);
  }
  return p;
}

std::optional<double> recourse_value(const lshaped::TwoStageProblem& p, std::size_t s,
                                     const std::vector<double>& x) {
  const auto& sc = p.scenarios[s];
  lshaped::LinearProgram lp(p.recourse_rows(), p.m());
  lp.objective = sc.q;
  lp.A = p.W;
  const auto tx = sc.T.multiply(x);
  for (std::size_t i = 0; i < p.recourse_rows(); ++i) lp.rhs[i] = sc.h[i] - tx[i];
  return vertex_enumeration(lp);
}

}  // namespace oracle
