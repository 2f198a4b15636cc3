#pragma once

#include <cstddef>
#include <span>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace lshaped {

/// Exact integer. Signed, because the dynamic bound is not always positive:
/// the Stirling sum can outweigh the binomial sum (always for b = 1).
using BigCount = boost::multiprecision::cpp_int;

std::string to_string(const BigCount& value);

/// C(N, k); throws std::invalid_argument when k > N.
BigCount binomial(std::size_t N, std::size_t k);
/// Partitions of N labelled elements into k nonempty blocks.
BigCount stirling2(std::size_t N, std::size_t k);
/// Sum over k of stirling2(N, k).
BigCount bell(std::size_t N);

/// [1 + N(b-1)]^m
BigCount bound_single_cut(std::size_t N, std::size_t b, std::size_t m);
/// 1 + N(b^m - 1)
BigCount bound_multi_cut(std::size_t N, std::size_t b, std::size_t m);
/// 1 + sum_a [1 + |S_a|(b-1)]^m - A
BigCount bound_aggregated(std::span<const std::size_t> sizes, std::size_t b, std::size_t m);
/// 1 + A([1 + A_L(b-1)]^m - 1)
BigCount bound_aggregated_upper(std::size_t A, std::size_t A_L, std::size_t b, std::size_t m);
/// 2 + sum_{a=lo..hi} C(N,a)[1 + a(b-1)]^m - sum_{a=lo..hi} S(N,a) - A_0
BigCount bound_dynamic_restricted(std::size_t N, std::size_t b, std::size_t m, std::size_t A0,
                                  std::size_t lo, std::size_t hi);
/// bound_dynamic_restricted over the full range 1..N.
BigCount bound_dynamic(std::size_t N, std::size_t b, std::size_t m, std::size_t A0);

}  // namespace lshaped
