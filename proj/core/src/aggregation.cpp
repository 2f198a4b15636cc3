#include "lshaped/aggregation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lshaped {

std::optional<std::string> validate_partitioning(const PartitioningScheme& scheme) {
  std::vector<bool> seen(scheme.N, false);
  for (std::size_t a = 0; a < scheme.parts.size(); ++a) {
    if (scheme.parts[a].empty()) return "empty part at position " + std::to_string(a);
    for (std::size_t s : scheme.parts[a]) {
      if (s >= scheme.N) return "index " + std::to_string(s) + " out of range";
      if (seen[s]) return "overlap at " + std::to_string(s);
      seen[s] = true;
    }
  }
  std::string uncovered;
  for (std::size_t s = 0; s < scheme.N; ++s)
    if (!seen[s]) uncovered += (uncovered.empty() ? "" : ",") + std::to_string(s);
  if (!uncovered.empty()) return "uncovered: " + uncovered;
  return std::nullopt;
}

SchemeStats scheme_stats(const PartitioningScheme& scheme) {
  SchemeStats stats;
  stats.size = scheme.parts.size();
  for (const auto& part : scheme.parts) stats.level = std::max(stats.level, part.size());
  return stats;
}

PartitioningScheme uniform_partition(std::size_t N, std::size_t T) {
  if (T < 1 || T > N)
    throw std::invalid_argument("uniform_partition: T must lie in [1, " + std::to_string(N) + "]");
  PartitioningScheme scheme;
  scheme.N = N;
  for (std::size_t start = 0; start < N; start += T) {
    std::vector<std::size_t> part;
    for (std::size_t s = start; s < std::min(N, start + T); ++s) part.push_back(s);
    scheme.parts.push_back(std::move(part));
  }
  return scheme;
}

PartitioningScheme partition_of(std::span<const OptimalityCut> cuts, std::size_t N) {
  PartitioningScheme scheme;
  scheme.N = N;
  for (const auto& c : cuts) scheme.parts.push_back(c.members);
  return scheme;
}

// ---------------------------------------------------------------------------
// Scheme strings

namespace {

std::string format_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::map<std::string, std::string> parse_params(const std::string& text, const std::string& family) {
  std::map<std::string, std::string> params;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw std::invalid_argument("scheme '" + family + "': expected name=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    if (params.count(key)) throw std::invalid_argument("scheme '" + family + "': duplicate parameter " + key);
    params[key] = item.substr(eq + 1);
  }
  return params;
}

double to_number(const std::string& family, const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("scheme '" + family + "': parameter " + key + " is not a number: '" +
                                value + "'");
  }
}

std::size_t to_count(const std::string& family, const std::string& key, double v) {
  if (!(v >= 1.0) || std::floor(v) != v || v > 1e15)
    throw std::invalid_argument("scheme '" + family + "': parameter " + key +
                                " must be a positive integer");
  return static_cast<std::size_t>(v);
}

class ParamReader {
 public:
  ParamReader(std::string family, std::map<std::string, std::string> params)
      : family_(std::move(family)), params_(std::move(params)) {}

  std::size_t count(const std::string& key, std::optional<std::size_t> fallback) {
    auto it = params_.find(key);
    if (it == params_.end()) {
      if (!fallback) throw std::invalid_argument("scheme '" + family_ + "': missing parameter " + key);
      return *fallback;
    }
    const std::size_t v = to_count(family_, key, to_number(family_, key, it->second));
    params_.erase(it);
    return v;
  }

  double number(const std::string& key, double fallback) {
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    const double v = to_number(family_, key, it->second);
    params_.erase(it);
    return v;
  }

  std::uint64_t seed(const std::string& key) {
    auto it = params_.find(key);
    if (it == params_.end()) return 0;
    try {
      if (it->second.empty() || !std::isdigit(static_cast<unsigned char>(it->second.front())))
        throw std::invalid_argument(it->second);
      std::size_t used = 0;
      const unsigned long long v = std::stoull(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(it->second);
      params_.erase(it);
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("scheme '" + family_ + "': seed must be a nonnegative integer");
    }
  }

  DistanceMeasure measure(const std::string& key) {
    auto it = params_.find(key);
    if (it == params_.end()) return DistanceMeasure::angular;
    const DistanceMeasure m = parse_distance_measure(it->second);
    params_.erase(it);
    return m;
  }

  void finish() const {
    if (!params_.empty())
      throw std::invalid_argument("scheme '" + family_ + "': unknown parameter " + params_.begin()->first);
  }

 private:
  std::string family_;
  std::map<std::string, std::string> params_;
};

BaseScheme parse_base(const std::string& family, const std::string& rest) {
  ParamReader reader(family, parse_params(rest, family));
  BaseScheme scheme;
  if (family == "multi") {
    scheme = MultiCut{};
  } else if (family == "single") {
    scheme = SingleCut{};
  } else if (family == "partial") {
    scheme = Partial{reader.count("T", std::nullopt)};
  } else if (family == "uniform") {
    scheme = Dynamic{SelectUniform{reader.count("T", std::nullopt)}};
  } else if (family == "closest") {
    SelectClosest rule;
    rule.A = reader.count("A", rule.A);
    rule.tau = reader.number("tau", rule.tau);
    rule.measure = reader.measure("measure");
    scheme = Dynamic{rule};
  } else if (family == "kmedoids") {
    Kmedoids rule;
    rule.k = reader.count("k", rule.k);
    rule.measure = reader.measure("measure");
    rule.seed = reader.seed("seed");
    scheme = Cluster{rule};
  } else {
    throw std::invalid_argument("unknown aggregation scheme '" + family + "'");
  }
  reader.finish();
  return scheme;
}

std::pair<std::string, std::string> split_family(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) return {text, ""};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

}  // namespace

AggregationScheme parse_scheme(const std::string& text) {
  const auto [family, rest] = split_family(text);
  if (family != "granulated") {
    return std::visit([](auto&& s) -> AggregationScheme { return s; }, parse_base(family, rest));
  }
  const std::size_t inner_pos = rest.find("inner=");
  if (inner_pos == std::string::npos)
    throw std::invalid_argument("scheme 'granulated': missing parameter inner");
  if (inner_pos > 0 && rest[inner_pos - 1] != ',')
    throw std::invalid_argument("scheme 'granulated': malformed parameter list");
  const std::string outer = rest.substr(0, inner_pos);
  const std::string inner_text = rest.substr(inner_pos + 6);
  ParamReader reader(family, parse_params(outer, family));
  Granulated g;
  g.T0 = reader.count("T0", std::nullopt);
  reader.finish();
  const auto [inner_family, inner_rest] = split_family(inner_text);
  if (inner_family == "granulated")
    throw std::invalid_argument("scheme 'granulated': inner scheme cannot be granulated");
  g.inner = parse_base(inner_family, inner_rest);
  return g;
}

namespace {

struct BaseNamer {
  std::string operator()(const MultiCut&) const { return "multi"; }
  std::string operator()(const SingleCut&) const { return "single"; }
  std::string operator()(const Partial& p) const { return "partial:T=" + std::to_string(p.T); }
  std::string operator()(const Dynamic& d) const {
    if (const auto* u = std::get_if<SelectUniform>(&d.rule)) return "uniform:T=" + std::to_string(u->T);
    const auto& c = std::get<SelectClosest>(d.rule);
    return "closest:A=" + std::to_string(c.A) + ",tau=" + format_value(c.tau) +
           ",measure=" + to_string(c.measure);
  }
  std::string operator()(const Cluster& c) const {
    return "kmedoids:k=" + std::to_string(c.rule.k) + ",measure=" + to_string(c.rule.measure) +
           ",seed=" + std::to_string(c.rule.seed);
  }
};

std::string base_family(const BaseScheme& s) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, MultiCut>) return "multi";
        if constexpr (std::is_same_v<V, SingleCut>) return "single";
        if constexpr (std::is_same_v<V, Partial>) return "partial";
        if constexpr (std::is_same_v<V, Dynamic>)
          return std::holds_alternative<SelectUniform>(v.rule) ? "uniform" : "closest";
        if constexpr (std::is_same_v<V, Cluster>) return "kmedoids";
      },
      s);
}

std::optional<BaseScheme> as_base(const AggregationScheme& scheme) {
  return std::visit(
      [](const auto& v) -> std::optional<BaseScheme> {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Granulated>)
          return std::nullopt;
        else
          return BaseScheme{v};
      },
      scheme);
}

bool set_base_parameter(BaseScheme& scheme, const std::string& name, double value) {
  const std::string family = base_family(scheme);
  auto count = [&] { return to_count(family, name, value); };
  if (auto* p = std::get_if<Partial>(&scheme); p && name == "T") {
    p->T = count();
    return true;
  }
  if (auto* d = std::get_if<Dynamic>(&scheme)) {
    if (auto* u = std::get_if<SelectUniform>(&d->rule); u && name == "T") {
      u->T = count();
      return true;
    }
    if (auto* c = std::get_if<SelectClosest>(&d->rule)) {
      if (name == "A") {
        c->A = count();
        return true;
      }
      if (name == "tau") {
        c->tau = value;
        return true;
      }
    }
  }
  if (auto* c = std::get_if<Cluster>(&scheme)) {
    if (name == "k") {
      c->rule.k = count();
      return true;
    }
    if (name == "seed") {
      if (!(value >= 0.0) || std::floor(value) != value)
        throw std::invalid_argument("scheme 'kmedoids': seed must be a nonnegative integer");
      c->rule.seed = static_cast<std::uint64_t>(value);
      return true;
    }
  }
  return false;
}

}  // namespace

std::string to_string(const BaseScheme& scheme) { return std::visit(BaseNamer{}, scheme); }

std::string to_string(const AggregationScheme& scheme) {
  if (const auto* g = std::get_if<Granulated>(&scheme))
    return "granulated:T0=" + std::to_string(g->T0) + ",inner=" + to_string(g->inner);
  return to_string(*as_base(scheme));
}

std::string scheme_family(const AggregationScheme& scheme) {
  if (std::holds_alternative<Granulated>(scheme)) return "granulated";
  return base_family(*as_base(scheme));
}

void set_parameter(AggregationScheme& scheme, const std::string& name, double value) {
  if (auto* g = std::get_if<Granulated>(&scheme)) {
    if (name == "T0") {
      g->T0 = to_count("granulated", name, value);
      return;
    }
    if (set_base_parameter(g->inner, name, value)) return;
    throw std::invalid_argument("scheme '" + to_string(scheme) + "' has no parameter " + name);
  }
  BaseScheme base = *as_base(scheme);
  if (!set_base_parameter(base, name, value))
    throw std::invalid_argument("scheme '" + to_string(scheme) + "' has no parameter " + name);
  scheme = std::visit([](auto&& s) -> AggregationScheme { return s; }, base);
}

namespace {

void validate_base(const BaseScheme& scheme, std::size_t units, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Partial>) {
          if (v.T < 1 || v.T > units)
            out.push_back("partial: T=" + std::to_string(v.T) + " must lie in [1, " +
                          std::to_string(units) + "]");
        } else if constexpr (std::is_same_v<V, Dynamic>) {
          if (const auto* u = std::get_if<SelectUniform>(&v.rule)) {
            if (u->T < 1 || u->T > units)
              out.push_back("uniform: T=" + std::to_string(u->T) + " must lie in [1, " +
                            std::to_string(units) + "]");
          } else {
            const auto& c = std::get<SelectClosest>(v.rule);
            if (c.A < 1) out.push_back("closest: A must be at least 1");
            if (!(c.tau >= 0.0)) out.push_back("closest: tau must be nonnegative");
            if (c.measure == DistanceMeasure::angular && c.tau > 1.0)
              out.push_back("closest: tau must not exceed 1 under the angular measure");
          }
        } else if constexpr (std::is_same_v<V, Cluster>) {
          if (v.rule.k < 1) out.push_back("kmedoids: k must be at least 1");
        }
      },
      scheme);
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

std::vector<std::string> validate_scheme(const AggregationScheme& scheme, std::size_t N) {
  std::vector<std::string> out;
  if (const auto* g = std::get_if<Granulated>(&scheme)) {
    if (g->T0 < 1 || g->T0 > N) {
      out.push_back("granulated: T0=" + std::to_string(g->T0) + " must lie in [1, " + std::to_string(N) + "]");
      return out;
    }
    validate_base(g->inner, ceil_div(N, g->T0), out);
    return out;
  }
  validate_base(*as_base(scheme), N, out);
  return out;
}

// ---------------------------------------------------------------------------
// Applying schemes

namespace {

std::vector<OptimalityCut> select_uniform(std::span<const OptimalityCut> cuts, const SelectUniform& rule) {
  std::vector<OptimalityCut> out;
  std::vector<OptimalityCut> slot;
  for (const auto& c : cuts) {
    slot.push_back(c);
    if (slot.size() >= rule.T) {
      out.push_back(aggregate(slot));
      slot.clear();
    }
  }
  if (!slot.empty()) out.push_back(aggregate(slot));
  return out;
}

std::vector<OptimalityCut> select_closest(std::span<const OptimalityCut> cuts, const SelectClosest& rule,
                                          std::size_t unit_count) {
  const std::size_t slots = std::max<std::size_t>(1, std::min(rule.A, unit_count));
  const std::size_t capacity = ceil_div(unit_count, slots);
  std::vector<std::optional<OptimalityCut>> running(slots);
  std::vector<std::size_t> fill(slots, 0);
  std::vector<OptimalityCut> out;

  for (const auto& c : cuts) {
    std::optional<std::size_t> closest;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < slots; ++a) {
      if (!running[a]) continue;
      const double d = robust_distance(c, *running[a], rule.measure);
      if (d < best) {
        best = d;
        closest = a;
      }
    }
    std::size_t target;
    if (closest && best <= rule.tau) {
      target = *closest;
    } else {
      auto empty = std::find_if(running.begin(), running.end(), [](const auto& r) { return !r; });
      target = empty != running.end() ? static_cast<std::size_t>(empty - running.begin()) : *closest;
    }
    if (running[target]) {
      const OptimalityCut pair[] = {*running[target], c};
      running[target] = aggregate(pair);
    } else {
      running[target] = c;
    }
    if (++fill[target] >= capacity) {
      out.push_back(std::move(*running[target]));
      running[target].reset();
      fill[target] = 0;
    }
  }
  for (auto& r : running)
    if (r) out.push_back(std::move(*r));
  return out;
}

std::vector<OptimalityCut> cluster_kmedoids(std::span<const OptimalityCut> cuts, const Kmedoids& rule) {
  if (cuts.empty()) return {};
  const std::size_t k = std::min(rule.k, cuts.size());
  const KmedoidsResult result = kmedoids_cluster(cuts, k, rule.measure, rule.seed);
  std::vector<std::vector<OptimalityCut>> groups(result.medoids.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) groups[result.assignment[i]].push_back(cuts[i]);
  std::vector<OptimalityCut> out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(aggregate(g));
  std::sort(out.begin(), out.end(),
            [](const OptimalityCut& a, const OptimalityCut& b) { return a.members.front() < b.members.front(); });
  return out;
}

}  // namespace

std::vector<OptimalityCut> apply_units(const BaseScheme& scheme, std::span<const OptimalityCut> cuts,
                                       std::size_t unit_size, std::size_t unit_count) {
  if (unit_size == 0) throw std::invalid_argument("apply_units: unit size must be positive");
  {
    std::vector<std::string> problems;
    validate_base(scheme, unit_count, problems);
    if (!problems.empty()) throw std::invalid_argument(problems.front());
  }
  return std::visit(
      [&](const auto& v) -> std::vector<OptimalityCut> {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, MultiCut>) {
          return {cuts.begin(), cuts.end()};
        } else if constexpr (std::is_same_v<V, SingleCut>) {
          if (cuts.empty()) return {};
          return {aggregate(cuts)};
        } else if constexpr (std::is_same_v<V, Partial>) {
          // Blocks come from unit identity, not position among survivors.
          std::map<std::size_t, std::vector<OptimalityCut>> blocks;
          for (const auto& c : cuts) blocks[c.members.front() / unit_size / v.T].push_back(c);
          std::vector<OptimalityCut> out;
          for (auto& [block, group] : blocks) out.push_back(aggregate(group));
          return out;
        } else if constexpr (std::is_same_v<V, Dynamic>) {
          if (const auto* u = std::get_if<SelectUniform>(&v.rule)) return select_uniform(cuts, *u);
          return select_closest(cuts, std::get<SelectClosest>(v.rule), unit_count);
        } else {
          return cluster_kmedoids(cuts, v.rule);
        }
      },
      scheme);
}

std::vector<OptimalityCut> granulate(std::span<const OptimalityCut> cuts, std::size_t T0) {
  if (T0 == 0) throw std::invalid_argument("granulate: T0 must be positive");
  std::map<std::size_t, std::vector<OptimalityCut>> granules;
  for (const auto& c : cuts) {
    if (c.members.empty()) throw std::invalid_argument("granulate: cut without members");
    const std::size_t g = c.members.front() / T0;
    if (c.members.back() / T0 != g) throw std::invalid_argument("granulate: cut spans several granules");
    granules[g].push_back(c);
  }
  std::vector<OptimalityCut> out;
  for (auto& [g, group] : granules) out.push_back(aggregate(group));
  return out;
}

std::vector<OptimalityCut> apply_scheme(const AggregationScheme& scheme, std::span<const OptimalityCut> cuts,
                                        std::size_t N) {
  if (const auto problems = validate_scheme(scheme, N); !problems.empty())
    throw std::invalid_argument(problems.front());
  for (const auto& c : cuts)
    if (c.members.empty() || c.members.back() >= N)
      throw std::invalid_argument("apply_scheme: cut members outside 0.." + std::to_string(N - 1));
  if (const auto* g = std::get_if<Granulated>(&scheme)) {
    const std::vector<OptimalityCut> granules = granulate(cuts, g->T0);
    return apply_units(g->inner, granules, g->T0, ceil_div(N, g->T0));
  }
  return apply_units(*as_base(scheme), cuts, 1, N);
}

}  // namespace lshaped
