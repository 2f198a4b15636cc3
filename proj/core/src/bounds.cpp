#include "lshaped/bounds.hpp"

#include <stdexcept>
#include <vector>

namespace lshaped {

namespace {

void require_positive(std::size_t v, const char* name) {
  if (v < 1) throw std::invalid_argument(std::string(name) + " must be at least 1");
}

BigCount power(BigCount base, std::size_t exp) {
  BigCount out = 1;
  while (exp > 0) {
    if (exp & 1) out *= base;
    base *= base;
    exp >>= 1;
  }
  return out;
}

// [1 + a(b-1)]^m, the per-aggregate term shared by every bound.
BigCount slope_term(std::size_t a, std::size_t b, std::size_t m) {
  return power(BigCount(1) + BigCount(a) * (b - 1), m);
}

}  // namespace

std::string to_string(const BigCount& value) { return value.str(); }

BigCount binomial(std::size_t N, std::size_t k) {
  if (k > N) throw std::invalid_argument("binomial: k=" + std::to_string(k) + " exceeds N=" + std::to_string(N));
  k = std::min(k, N - k);
  BigCount out = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    out *= N - k + i;
    out /= i;
  }
  return out;
}

BigCount stirling2(std::size_t N, std::size_t k) {
  if (k > N) throw std::invalid_argument("stirling2: k=" + std::to_string(k) + " exceeds N=" + std::to_string(N));
  // Row-by-row: S(n,j) = j S(n-1,j) + S(n-1,j-1).
  std::vector<BigCount> row(k + 1, 0);
  row[0] = 1;
  for (std::size_t n = 1; n <= N; ++n) {
    for (std::size_t j = std::min(n, k); j >= 1; --j) row[j] = row[j] * j + row[j - 1];
    row[0] = 0;
  }
  return row[k];
}

BigCount bell(std::size_t N) {
  BigCount out = 0;
  for (std::size_t k = 0; k <= N; ++k) out += stirling2(N, k);
  return out;
}

BigCount bound_single_cut(std::size_t N, std::size_t b, std::size_t m) {
  require_positive(N, "N");
  require_positive(b, "b");
  require_positive(m, "m");
  return slope_term(N, b, m);
}

BigCount bound_multi_cut(std::size_t N, std::size_t b, std::size_t m) {
  require_positive(N, "N");
  require_positive(b, "b");
  require_positive(m, "m");
  return 1 + BigCount(N) * (power(BigCount(b), m) - 1);
}

BigCount bound_aggregated(std::span<const std::size_t> sizes, std::size_t b, std::size_t m) {
  if (sizes.empty()) throw std::invalid_argument("bound_aggregated: no aggregates");
  require_positive(b, "b");
  require_positive(m, "m");
  BigCount out = 1;
  for (std::size_t s : sizes) {
    require_positive(s, "aggregate size");
    out += slope_term(s, b, m);
  }
  return out - sizes.size();
}

BigCount bound_aggregated_upper(std::size_t A, std::size_t A_L, std::size_t b, std::size_t m) {
  require_positive(A, "A");
  require_positive(A_L, "A_L");
  require_positive(b, "b");
  require_positive(m, "m");
  return 1 + BigCount(A) * (slope_term(A_L, b, m) - 1);
}

BigCount bound_dynamic_restricted(std::size_t N, std::size_t b, std::size_t m, std::size_t A0,
                                  std::size_t lo, std::size_t hi) {
  require_positive(N, "N");
  require_positive(b, "b");
  require_positive(m, "m");
  if (A0 < 1 || A0 > N) throw std::invalid_argument("A0 must lie in [1, N]");
  if (lo < 1 || hi > N || lo > hi) throw std::invalid_argument("need 1 <= lo <= hi <= N");
  BigCount out = 2;
  for (std::size_t a = lo; a <= hi; ++a) out += binomial(N, a) * slope_term(a, b, m) - stirling2(N, a);
  return out - A0;
}

BigCount bound_dynamic(std::size_t N, std::size_t b, std::size_t m, std::size_t A0) {
  return bound_dynamic_restricted(N, b, m, A0, 1, N);
}

}  // namespace lshaped
