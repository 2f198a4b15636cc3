#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lshaped/aggregation.hpp"
#include "lshaped/rng.hpp"

namespace lshaped {

namespace {

constexpr std::size_t kMaxSweeps = 100;

// Nearest medoid for every point. Medoids own themselves even when a
// duplicate point with a lower index is also a medoid.
std::vector<std::size_t> assign(const Matrix& d, const std::vector<std::size_t>& medoids) {
  const std::size_t n = d.rows();
  std::vector<std::size_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto self = std::find(medoids.begin(), medoids.end(), i);
    if (self != medoids.end()) {
      out[i] = static_cast<std::size_t>(self - medoids.begin());
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < medoids.size(); ++c) {
      if (d(medoids[c], i) < best) {
        best = d(medoids[c], i);
        out[i] = c;
      }
    }
  }
  return out;
}

double total_cost(const Matrix& d, const std::vector<std::size_t>& medoids) {
  double cost = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m : medoids) best = std::min(best, d(m, i));
    cost += best;
  }
  return cost;
}

std::vector<std::size_t> seed_medoids(const Matrix& d, std::size_t k, std::uint64_t seed) {
  const std::size_t n = d.rows();
  Xorshift64Star rng(seed);
  std::vector<std::uint64_t> key(n);
  for (auto& v : key) v = rng.next();
  auto better = [&](double a, std::size_t i, double b, std::size_t j, bool larger) {
    if (a != b) return larger ? a > b : a < b;
    return key[i] != key[j] ? key[i] < key[j] : i < j;
  };

  std::size_t first = 0;
  std::vector<double> total(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) total[i] += d(i, j);
  for (std::size_t i = 1; i < n; ++i)
    if (better(total[i], i, total[first], first, false)) first = i;

  std::vector<std::size_t> medoids{first};
  std::vector<bool> chosen(n, false);
  chosen[first] = true;
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = d(first, i);
  while (medoids.size() < k) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      if (pick == n || better(nearest[i], i, nearest[pick], pick, true)) pick = i;
    }
    chosen[pick] = true;
    medoids.push_back(pick);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], d(pick, i));
  }
  std::sort(medoids.begin(), medoids.end());
  return medoids;
}

}  // namespace

double kmedoids_cost(const Matrix& distances, std::span<const std::size_t> medoids,
                     std::span<const std::size_t> assignment) {
  double cost = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) cost += distances(medoids[assignment[i]], i);
  return cost;
}

KmedoidsResult kmedoids(const Matrix& d, std::size_t k, std::uint64_t seed) {
  const std::size_t n = d.rows();
  if (d.cols() != n) throw std::invalid_argument("kmedoids: distance matrix must be square");
  if (k == 0 || k > n)
    throw std::invalid_argument("kmedoids: k=" + std::to_string(k) + " must lie in [1, " + std::to_string(n) + "]");

  KmedoidsResult result;
  std::vector<std::size_t> medoids = seed_medoids(d, k, seed);

  // Alternate assignment and per-cluster medoid updates.
  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const std::vector<std::size_t> assignment = assign(d, medoids);
    bool changed = false;
    for (std::size_t c = 0; c < medoids.size(); ++c) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if (assignment[i] == c) members.push_back(i);
      auto cost_of = [&](std::size_t m) {
        double s = 0.0;
        for (std::size_t j : members) s += d(m, j);
        return s;
      };
      std::size_t best = medoids[c];
      double best_cost = cost_of(best);
      for (std::size_t i : members) {
        const double ci = cost_of(i);
        if (ci < best_cost) {
          best_cost = ci;
          best = i;
        }
      }
      if (best != medoids[c]) {
        medoids[c] = best;
        changed = true;
      }
    }
    ++result.sweeps;
    std::sort(medoids.begin(), medoids.end());
    if (!changed) break;
  }

  // Swap polishing: best single medoid/non-medoid exchange until none helps.
  double cost = total_cost(d, medoids);
  for (;;) {
    std::vector<double> d1(n), d2(n);
    std::vector<std::size_t> owner(n);
    for (std::size_t j = 0; j < n; ++j) {
      d1[j] = d2[j] = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < medoids.size(); ++c) {
        const double v = d(medoids[c], j);
        if (v < d1[j]) {
          d2[j] = d1[j];
          d1[j] = v;
          owner[j] = c;
        } else if (v < d2[j]) {
          d2[j] = v;
        }
      }
    }
    double best_cost = cost;
    std::size_t best_c = 0, best_o = n;
    for (std::size_t c = 0; c < medoids.size(); ++c) {
      for (std::size_t o = 0; o < n; ++o) {
        if (std::find(medoids.begin(), medoids.end(), o) != medoids.end()) continue;
        double trial = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double keep = owner[j] == c ? d2[j] : d1[j];
          trial += std::min(keep, d(o, j));
        }
        if (trial < best_cost) {
          best_cost = trial;
          best_c = c;
          best_o = o;
        }
      }
    }
    if (best_o == n || best_cost >= cost - 1e-12 * (1.0 + std::abs(cost))) break;
    medoids[best_c] = best_o;
    std::sort(medoids.begin(), medoids.end());
    cost = total_cost(d, medoids);
  }

  result.medoids = medoids;
  result.assignment = assign(d, medoids);
  result.cost = kmedoids_cost(d, result.medoids, result.assignment);
  return result;
}

KmedoidsResult kmedoids_cluster(std::span<const OptimalityCut> points, std::size_t k, DistanceMeasure measure,
                                std::uint64_t seed) {
  const std::size_t n = points.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = robust_distance(points[i], points[j], measure);
  return kmedoids(d, k, seed);
}

}  // namespace lshaped
