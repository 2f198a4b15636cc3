#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lshaped/engine.hpp"

namespace lshaped::cli {

/// Runs one command line (without the program name). Returns the exit code:
/// 0 converged/ok, 1 usage or input errors, 2 iteration limit, 3 master infeasible.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr const char* kBenchHeader = "scheme,param,value,N_I,N_C,N_T,rel_cut,rel_iter,rel_time,status";

struct BenchRow {
  std::string scheme;
  std::string param;
  std::string value;
  std::size_t N_I = 0;
  std::size_t N_C = 0;
  double N_T = 0.0;
  std::optional<double> rel_cut;
  std::optional<double> rel_iter;
  std::optional<double> rel_time;
  std::string status;

  bool operator==(const BenchRow&) const = default;
};

std::string format_bench_row(const BenchRow& row);
/// Inverse of format_bench_row; throws std::invalid_argument on malformed lines.
BenchRow parse_bench_row(const std::string& line);

/// `name=start:stop:step`, inclusive of stop.
struct Sweep {
  std::string name;
  std::vector<double> values;
};
Sweep parse_sweep(const std::string& text);

/// The JSON report written by `solve`.
std::string report_json(const SolveReport& report, const std::string& scheme, const TwoStageProblem& problem);

/// Reads LSHAPED_LOG and routes library logging to stderr.
void configure_logging();

}  // namespace lshaped::cli
