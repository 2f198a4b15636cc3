#include "lshaped/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lshaped {

std::string to_string(DistanceMeasure measure) {
  switch (measure) {
    case DistanceMeasure::absolute: return "absolute";
    case DistanceMeasure::angular: return "angular";
    case DistanceMeasure::spatioangular: return "spatioangular";
  }
  return "?";
}

DistanceMeasure parse_distance_measure(const std::string& name) {
  if (name == "absolute") return DistanceMeasure::absolute;
  if (name == "angular") return DistanceMeasure::angular;
  if (name == "spatioangular") return DistanceMeasure::spatioangular;
  throw std::invalid_argument("unknown distance measure '" + name + "'");
}

OptimalityCut make_optimality_cut(std::size_t scenario, std::span<const double> lambda,
                                  const Scenario& data, std::size_t iteration) {
  if (lambda.size() != data.h.size() || data.T.rows() != data.h.size())
    throw std::invalid_argument("make_optimality_cut: dual has " + std::to_string(lambda.size()) +
                                " entries, expected " + std::to_string(data.h.size()));
  OptimalityCut cut;
  cut.grad = data.T.multiply_transposed(lambda);
  for (double& g : cut.grad) g *= data.probability;
  cut.offset = data.probability * dot(lambda, data.h);
  cut.members = {scenario};
  cut.iteration = iteration;
  return cut;
}

FeasibilityCut make_feasibility_cut(std::size_t scenario, std::span<const double> sigma,
                                    const Scenario& data, const Matrix& W, std::size_t iteration) {
  if (sigma.size() != data.h.size() || W.rows() != sigma.size())
    throw std::invalid_argument("make_feasibility_cut: ray has the wrong dimension");
  double scale = 1.0;
  for (double v : sigma) scale = std::max(scale, std::abs(v));
  const std::vector<double> sw = W.multiply_transposed(sigma);
  for (std::size_t j = 0; j < sw.size(); ++j)
    if (sw[j] > 1e-9 * scale)
      throw std::invalid_argument("make_feasibility_cut: sigma'W has a positive entry at column " +
                                  std::to_string(j));
  FeasibilityCut cut;
  cut.grad = data.T.multiply_transposed(sigma);
  cut.offset = dot(sigma, data.h);
  cut.scenario = scenario;
  cut.iteration = iteration;
  return cut;
}

OptimalityCut aggregate(std::span<const OptimalityCut> cuts) {
  if (cuts.empty()) throw std::invalid_argument("aggregate: no cuts");
  std::vector<std::size_t> order(cuts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (const auto& c : cuts)
    if (c.members.empty()) throw std::invalid_argument("aggregate: cut without members");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cuts[a].members.front() < cuts[b].members.front();
  });

  OptimalityCut out;
  const std::size_t n = cuts[order.front()].grad.size();
  out.grad.assign(n, 0.0);
  out.iteration = cuts[order.front()].iteration;
  for (std::size_t k : order) {
    const OptimalityCut& c = cuts[k];
    if (c.grad.size() != n) throw std::invalid_argument("aggregate: gradient lengths differ");
    if (k == order.front()) {
      out.grad = c.grad;
      out.offset = c.offset;
    } else {
      for (std::size_t j = 0; j < n; ++j) out.grad[j] += c.grad[j];
      out.offset += c.offset;
    }
    out.members.insert(out.members.end(), c.members.begin(), c.members.end());
  }
  std::sort(out.members.begin(), out.members.end());
  if (auto dup = std::adjacent_find(out.members.begin(), out.members.end()); dup != out.members.end())
    throw std::invalid_argument("aggregate: member sets overlap at scenario " + std::to_string(*dup));
  return out;
}

double violation(const OptimalityCut& cut, std::span<const double> x, double theta_sum) {
  return cut.offset - dot(cut.grad, x) - theta_sum;
}

double violation(const OptimalityCut& cut, std::span<const double> x,
                 std::span<const double> theta) {
  double sum = 0.0;
  for (std::size_t s : cut.members) {
    if (s >= theta.size() || std::isnan(theta[s]))
      throw std::invalid_argument("violation: no theta value for scenario " + std::to_string(s));
    sum += theta[s];
  }
  return violation(cut, x, sum);
}

bool is_violated(double violation, double offset, double tol) {
  return violation > tol * (1.0 + std::abs(offset));
}

namespace {

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double angular_term(const OptimalityCut& a, const OptimalityCut& b) {
  const double aa = dot(a.grad, a.grad);
  const double bb = dot(b.grad, b.grad);
  if (aa == 0.0 || bb == 0.0)
    throw std::invalid_argument("distance: angular measure undefined for a zero gradient");
  const double cosine = std::min(1.0, std::abs(dot(a.grad, b.grad)) / std::sqrt(aa * bb));
  return std::max(0.0, 1.0 - cosine);
}

double scale_of(const OptimalityCut& c) { return 1.0 / static_cast<double>(c.members.size()); }

}  // namespace

double distance(const OptimalityCut& a, const OptimalityCut& b, DistanceMeasure measure) {
  if (a.grad.size() != b.grad.size()) throw std::invalid_argument("distance: gradient lengths differ");
  if (a.members.empty() || b.members.empty())
    throw std::invalid_argument("distance: cut without members");
  switch (measure) {
    case DistanceMeasure::absolute: {
      const double sa = scale_of(a);
      const double sb = scale_of(b);
      std::vector<double> ca(a.grad.size() + 1), cb(b.grad.size() + 1), diff(a.grad.size() + 1);
      for (std::size_t j = 0; j < a.grad.size(); ++j) {
        ca[j] = sa * a.grad[j];
        cb[j] = sb * b.grad[j];
      }
      ca.back() = sa * a.offset;
      cb.back() = sb * b.offset;
      for (std::size_t j = 0; j < ca.size(); ++j) diff[j] = ca[j] - cb[j];
      const double denom = std::max(norm(ca), norm(cb));
      if (denom == 0.0) throw std::invalid_argument("distance: absolute measure undefined for two zero cuts");
      return norm(diff) / denom;
    }
    case DistanceMeasure::angular:
      return angular_term(a, b);
    case DistanceMeasure::spatioangular: {
      const double qa = scale_of(a) * a.offset;
      const double qb = scale_of(b) * b.offset;
      const double denom = std::max(std::abs(qa), std::abs(qb));
      const double offset_term = denom == 0.0 ? 0.0 : std::abs(qa - qb) / denom;
      return angular_term(a, b) + offset_term;
    }
  }
  return 0.0;
}

double robust_distance(const OptimalityCut& a, const OptimalityCut& b, DistanceMeasure measure) {
  const bool zero_a = std::all_of(a.grad.begin(), a.grad.end(), [](double g) { return g == 0.0; });
  const bool zero_b = std::all_of(b.grad.begin(), b.grad.end(), [](double g) { return g == 0.0; });
  if (measure != DistanceMeasure::absolute && (zero_a || zero_b)) measure = DistanceMeasure::absolute;
  if (measure == DistanceMeasure::absolute && zero_a && zero_b && a.offset == 0.0 && b.offset == 0.0)
    return 0.0;
  return distance(a, b, measure);
}

}  // namespace lshaped
