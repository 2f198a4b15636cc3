#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lshaped/cuts.hpp"
#include "lshaped/matrix.hpp"

namespace lshaped {

/// Disjoint, covering index sets over scenarios 0..N-1.
struct PartitioningScheme {
  std::size_t N = 0;
  std::vector<std::vector<std::size_t>> parts;

  bool operator==(const PartitioningScheme&) const = default;
};

/// nullopt when the parts are nonempty subsets of 0..N-1 that are pairwise
/// disjoint and cover every index; otherwise a description of the first
/// violation found ("overlap at 2", "uncovered: 1").
std::optional<std::string> validate_partitioning(const PartitioningScheme& scheme);

struct SchemeStats {
  std::size_t size = 0;   ///< number of aggregates A(S)
  std::size_t level = 0;  ///< largest aggregate A_L(S)
};

SchemeStats scheme_stats(const PartitioningScheme& scheme);

/// Contiguous blocks of T indices; the last block may be smaller.
PartitioningScheme uniform_partition(std::size_t N, std::size_t T);

/// Member sets of a list of cuts.
PartitioningScheme partition_of(std::span<const OptimalityCut> cuts, std::size_t N);

// Selection and clustering rules.

/// Fill aggregates of exactly T cuts in arrival order.
struct SelectUniform {
  std::size_t T = 1;
  bool operator==(const SelectUniform&) const = default;
};

/// Place each cut in the closest open aggregate, or open a new one when
/// nothing is within tau. An aggregate is flushed once it holds ceil(U/A)
/// units, where U is the number of units being aggregated.
struct SelectClosest {
  std::size_t A = 8;
  double tau = 0.3;
  DistanceMeasure measure = DistanceMeasure::angular;
  bool operator==(const SelectClosest&) const = default;
};

struct Kmedoids {
  std::size_t k = 20;
  DistanceMeasure measure = DistanceMeasure::angular;
  std::uint64_t seed = 0;
  bool operator==(const Kmedoids&) const = default;
};

// Aggregation schemes.

struct MultiCut {
  bool operator==(const MultiCut&) const = default;
};
struct SingleCut {
  bool operator==(const SingleCut&) const = default;
};
/// Static blocks of T consecutive units.
struct Partial {
  std::size_t T = 1;
  bool operator==(const Partial&) const = default;
};
/// Streaming placement of each cut by a selection rule.
struct Dynamic {
  std::variant<SelectUniform, SelectClosest> rule;
  bool operator==(const Dynamic&) const = default;
};
/// Buffer all cuts of an iteration and cluster them.
struct Cluster {
  Kmedoids rule;
  bool operator==(const Cluster&) const = default;
};

/// Every scheme that can run inside a granulated one.
using BaseScheme = std::variant<MultiCut, SingleCut, Partial, Dynamic, Cluster>;

/// Fixed uniform granules of T0 scenarios, each owning one master variable;
/// the inner scheme aggregates granule cuts.
struct Granulated {
  std::size_t T0 = 1;
  BaseScheme inner = MultiCut{};
  bool operator==(const Granulated&) const = default;
};

using AggregationScheme = std::variant<MultiCut, SingleCut, Partial, Dynamic, Cluster, Granulated>;

/// Parses the command-line form: `multi`, `single`, `partial:T=16`,
/// `uniform:T=16`, `closest:A=8,tau=0.3,measure=angular`,
/// `kmedoids:k=20,measure=angular,seed=0`, `granulated:T0=5,inner=kmedoids:k=20`.
/// Everything after `inner=` belongs to the inner scheme. Throws
/// std::invalid_argument on malformed strings.
AggregationScheme parse_scheme(const std::string& text);
std::string to_string(const AggregationScheme& scheme);
std::string to_string(const BaseScheme& scheme);

/// Short family label: multi, single, partial, uniform, closest, kmedoids, granulated.
std::string scheme_family(const AggregationScheme& scheme);

/// Sets a named numeric parameter (T, A, tau, k, seed, T0) on the scheme, or on
/// the inner scheme of a granulated one. Throws std::invalid_argument when no
/// such parameter exists.
void set_parameter(AggregationScheme& scheme, const std::string& name, double value);

/// Parameter violations for a problem with N scenarios; empty when valid.
std::vector<std::string> validate_scheme(const AggregationScheme& scheme, std::size_t N);

/// Aggregates one iteration's cuts. `cuts` are singleton cuts ordered by
/// scenario index (a subset of 0..N-1 may be present). Output member sets
/// partition the input member union.
std::vector<OptimalityCut> apply_scheme(const AggregationScheme& scheme,
                                        std::span<const OptimalityCut> cuts, std::size_t N);

/// Aggregates cuts whose members are unit blocks of `unit_size` consecutive
/// scenarios (unit u covers [u*unit_size, (u+1)*unit_size)). With unit_size 1
/// this is apply_scheme on a non-granulated scheme; granulated runs apply the
/// inner scheme with unit_size = T0.
std::vector<OptimalityCut> apply_units(const BaseScheme& scheme, std::span<const OptimalityCut> cuts,
                                       std::size_t unit_size, std::size_t unit_count);

/// Sums singleton cuts into the uniform granules of size T0, in granule order.
std::vector<OptimalityCut> granulate(std::span<const OptimalityCut> cuts, std::size_t T0);

struct KmedoidsResult {
  std::vector<std::size_t> assignment;  ///< point -> cluster (index into medoids)
  std::vector<std::size_t> medoids;     ///< point indices, ascending
  double cost = 0.0;                    ///< summed distance of points to their medoid
  std::size_t sweeps = 0;
};

/// k-medoids on a symmetric distance matrix: farthest-point seeding,
/// alternating assign/update sweeps (at most 100), then best-improvement
/// medoid swaps until no single swap lowers the cost. Ties in assignment go
/// to the medoid with the lowest point index; the seed only orders exact
/// ties during seeding. Throws std::invalid_argument if k is 0 or exceeds
/// the point count.
KmedoidsResult kmedoids(const Matrix& distances, std::size_t k, std::uint64_t seed);

/// k-medoids over cuts using robust_distance under `measure`.
KmedoidsResult kmedoids_cluster(std::span<const OptimalityCut> points, std::size_t k,
                                DistanceMeasure measure, std::uint64_t seed);

/// Summed distance of each point to its assigned medoid.
double kmedoids_cost(const Matrix& distances, std::span<const std::size_t> medoids,
                     std::span<const std::size_t> assignment);

}  // namespace lshaped
