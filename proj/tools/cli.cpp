#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lshaped/bounds.hpp"
#include "lshaped/native_format.hpp"
#include "lshaped/smps.hpp"

namespace lshaped::cli {

namespace {

using nlohmann::json;

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a count: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct InputOptions {
  std::string input;
  std::string core, time, stoch;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t cap = kDefaultScenarioCap;

  void attach(CLI::App* app) {
    app->add_option("--input", input, "native JSON problem or template");
    app->add_option("--core", core, "SMPS core file");
    app->add_option("--time", time, "SMPS time file");
    app->add_option("--stoch", stoch, "SMPS stoch file");
    app->add_option("--samples", samples, "sample N scenarios from a template (weights 1/N)");
    app->add_option("--seed", seed, "sampling seed");
    app->add_option("--scenario-cap", cap, "largest scenario cross product to enumerate");
  }

  TwoStageProblem load() const {
    const bool smps = !core.empty() || !time.empty() || !stoch.empty();
    if (smps && !input.empty()) throw std::invalid_argument("use either --input or --core/--time/--stoch");
    if (!smps && input.empty()) throw std::invalid_argument("no input: give --input or --core/--time/--stoch");
    if (smps && (core.empty() || time.empty() || stoch.empty()))
      throw std::invalid_argument("SMPS input needs all of --core, --time and --stoch");

    NativeDocument doc = smps ? NativeDocument{parse_smps(read_smps_files(core, time, stoch))}
                              : read_native_file(input);
    if (auto* p = std::get_if<TwoStageProblem>(&doc)) {
      if (samples > 0) throw std::invalid_argument("--samples needs a stochastic template, not explicit scenarios");
      return std::move(*p);
    }
    const auto& tmpl = std::get<StochasticTemplate>(doc);
    if (samples > 0) return sample_instance(tmpl, samples, seed);
    return enumerate_scenarios(tmpl, cap);
  }
};

struct EngineOptions {
  std::string scheme = "multi";
  double tol = 1e-2;
  double violation_tol = kDefaultViolationTolerance;
  std::size_t max_iters = 5000;
  std::size_t workers = 1;

  void attach(CLI::App* app, bool with_scheme = true) {
    if (with_scheme) app->add_option("--scheme", scheme, "aggregation scheme, e.g. partial:T=16")->capture_default_str();
    app->add_option("--tol", tol, "relative optimality tolerance")->capture_default_str();
    app->add_option("--violation-tol", violation_tol, "relative cut violation tolerance")->capture_default_str();
    app->add_option("--max-iters", max_iters, "iteration limit")->capture_default_str();
    app->add_option("--workers", workers, "subproblem worker threads")->capture_default_str();
  }

  EngineConfig config(const AggregationScheme& s) const {
    EngineConfig cfg;
    cfg.rel_tol = tol;
    cfg.violation_tol = violation_tol;
    cfg.max_iterations = max_iters;
    cfg.workers = workers;
    cfg.scheme = s;
    return cfg;
  }
};

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return 0;
    case SolveStatus::iteration_limit: return 2;
    case SolveStatus::master_infeasible: return 3;
  }
  return 1;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

std::string history_csv(const SolveReport& report) {
  std::ostringstream os;
  os << "k,lower,upper,cuts_added,cuts_skipped,feasibility_cuts\n";
  for (const auto& r : report.history)
    os << r.k << ',' << shortest(r.lower) << ',' << shortest(r.upper) << ',' << r.cuts_added << ','
       << r.cuts_skipped << ',' << r.feasibility_cuts << '\n';
  return os.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------

int do_solve(const InputOptions& in, const EngineOptions& eng, const std::string& output, const std::string& format,
             std::ostream& out, std::ostream& err) {
  const TwoStageProblem problem = in.load();
  const AggregationScheme scheme = parse_scheme(eng.scheme);
  const SolveReport report = solve_lshaped(problem, eng.config(scheme));
  const std::string text = format == "csv" ? history_csv(report) : report_json(report, to_string(scheme), problem);
  write_output(output, text, out);
  if (report.status != SolveStatus::converged) err << "status: " << to_string(report.status) << '\n';
  return exit_code(report.status);
}

int do_bench(const InputOptions& in, const EngineOptions& eng, const std::string& sweep_text, std::size_t repeats,
             const std::string& output, const std::string& format, std::ostream& out, std::ostream& err) {
  if (repeats < 1) throw std::invalid_argument("--repeats must be at least 1");
  const TwoStageProblem problem = in.load();
  AggregationScheme target = parse_scheme(eng.scheme);
  std::optional<Sweep> sweep;
  if (!sweep_text.empty()) sweep = parse_sweep(sweep_text);
  if (sweep) {
    for (double v : sweep->values) {
      AggregationScheme probe = target;
      set_parameter(probe, sweep->name, v);
      if (auto problems = validate_scheme(probe, problem.num_scenarios()); !problems.empty())
        throw std::invalid_argument("sweep value " + shortest(v) + ": " + problems.front());
    }
  }

  const SolveReport multi = solve_lshaped(problem, eng.config(MultiCut{}));
  const SolveReport single = solve_lshaped(problem, eng.config(SingleCut{}));
  if (multi.status != SolveStatus::converged || single.status != SolveStatus::converged) {
    err << "baseline did not converge (multi: " << to_string(multi.status) << ", single: " << to_string(single.status)
        << ")\n";
    return 2;
  }

  std::vector<BenchRow> rows;
  auto run_one = [&](const AggregationScheme& scheme, const std::string& param, const std::string& value) {
    std::vector<double> times;
    SolveReport first;
    for (std::size_t r = 0; r < repeats; ++r) {
      SolveReport rep = solve_lshaped(problem, eng.config(scheme));
      times.push_back(rep.metrics.seconds);
      if (r == 0) first = std::move(rep);
    }
    BenchRow row;
    row.scheme = scheme_family(scheme);
    row.param = param;
    row.value = value;
    row.N_I = first.metrics.iterations;
    row.N_C = first.metrics.optimality_cuts;
    row.N_T = median(times);
    row.status = to_string(first.status);
    if (first.status == SolveStatus::converged) {
      first.metrics.seconds = row.N_T;
      const RelativeComplexity rel = compute_relative_complexities(first, multi, single);
      row.rel_cut = rel.rel_cut;
      row.rel_iter = rel.rel_iter;
      row.rel_time = rel.rel_time;
    }
    rows.push_back(row);
  };
  if (sweep) {
    for (double v : sweep->values) {
      AggregationScheme s = target;
      set_parameter(s, sweep->name, v);
      run_one(s, sweep->name, shortest(v));
    }
  } else {
    run_one(target, "", "");
  }

  std::ostringstream os;
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"scheme", r.scheme}, {"param", r.param}, {"value", r.value}, {"N_I", r.N_I},
                     {"N_C", r.N_C}, {"N_T", r.N_T}, {"rel_cut", r.rel_cut ? json(*r.rel_cut) : json(nullptr)},
                     {"rel_iter", r.rel_iter ? json(*r.rel_iter) : json(nullptr)},
                     {"rel_time", r.rel_time ? json(*r.rel_time) : json(nullptr)}, {"status", r.status}});
    os << arr.dump(2) << '\n';
  } else {
    os << kBenchHeader << '\n';
    for (const auto& r : rows) os << format_bench_row(r) << '\n';
  }
  write_output(output, os.str(), out);
  return 0;
}

struct BoundsOptions {
  bool single = false, multi = false, aggregated = false, aggregated_upper = false, dynamic = false, compare = false;
  std::size_t N = 0, b = 0, m = 0, A = 0, AL = 0, A0 = 0, lo = 0, hi = 0, T = 0;
  std::string sizes;
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_count(s));
  return out;
}

int do_bounds(const BoundsOptions& o, std::ostream& out) {
  const int modes = o.single + o.multi + o.aggregated + o.aggregated_upper + o.dynamic + o.compare;
  if (modes != 1)
    throw std::invalid_argument("choose exactly one of --single, --multi, --aggregated, --aggregated-upper, --dynamic, --compare");
  auto need = [](std::size_t v, const char* name) {
    if (v < 1) throw std::invalid_argument(std::string("--") + name + " is required and must be at least 1");
  };
  need(o.b, "b");
  need(o.m, "m");
  if (o.single || o.multi || o.dynamic || o.compare) need(o.N, "N");
  if (o.single) out << to_string(bound_single_cut(o.N, o.b, o.m)) << '\n';
  if (o.multi) out << to_string(bound_multi_cut(o.N, o.b, o.m)) << '\n';
  if (o.aggregated) {
    if (o.sizes.empty()) throw std::invalid_argument("--aggregated needs --sizes");
    out << to_string(bound_aggregated(parse_sizes(o.sizes), o.b, o.m)) << '\n';
  }
  if (o.aggregated_upper) {
    need(o.A, "A");
    need(o.AL, "AL");
    out << to_string(bound_aggregated_upper(o.A, o.AL, o.b, o.m)) << '\n';
  }
  if (o.dynamic) {
    need(o.A0, "A0");
    const std::size_t lo = o.lo ? o.lo : 1;
    const std::size_t hi = o.hi ? o.hi : o.N;
    out << to_string(bound_dynamic_restricted(o.N, o.b, o.m, o.A0, lo, hi)) << '\n';
  }
  if (o.compare) {
    std::vector<std::size_t> sizes;
    std::string label;
    if (!o.sizes.empty()) {
      sizes = parse_sizes(o.sizes);
      label = "aggregated (sizes " + o.sizes + ")";
    } else {
      const std::size_t T = o.T ? o.T : 1;
      for (const auto& part : uniform_partition(o.N, T).parts) sizes.push_back(part.size());
      label = "aggregated (uniform T=" + std::to_string(T) + ")";
    }
    const std::size_t A0 = o.A0 ? o.A0 : 1;
    out << "single: " << to_string(bound_single_cut(o.N, o.b, o.m)) << '\n';
    out << "multi: " << to_string(bound_multi_cut(o.N, o.b, o.m)) << '\n';
    out << label << ": " << to_string(bound_aggregated(sizes, o.b, o.m)) << '\n';
    out << "dynamic (A0=" << A0 << "): " << to_string(bound_dynamic(o.N, o.b, o.m, A0)) << '\n';
  }
  return 0;
}

int do_validate(const InputOptions& in, std::ostream& out) {
  const TwoStageProblem p = in.load();
  const auto problems = validate_problem(p);
  for (const auto& msg : problems) out << "invalid: " << msg << '\n';
  if (!problems.empty()) return 1;
  out << "ok: " << (p.name.empty() ? "(unnamed)" : p.name) << ", n=" << p.n() << ", p=" << p.first.p()
      << ", m=" << p.m() << ", rows=" << p.recourse_rows() << ", N=" << p.num_scenarios() << '\n';
  return 0;
}

}  // namespace

std::string format_bench_row(const BenchRow& r) {
  auto opt = [](const std::optional<double>& v) { return v ? shortest(*v) : std::string(); };
  for (const std::string* f : {&r.scheme, &r.param, &r.value, &r.status})
    if (f->find(',') != std::string::npos) throw std::invalid_argument("bench field contains a comma: " + *f);
  std::ostringstream os;
  os << r.scheme << ',' << r.param << ',' << r.value << ',' << r.N_I << ',' << r.N_C << ',' << shortest(r.N_T)
     << ',' << opt(r.rel_cut) << ',' << opt(r.rel_iter) << ',' << opt(r.rel_time) << ',' << r.status;
  return os.str();
}

BenchRow parse_bench_row(const std::string& line) {
  const auto f = split(line, ',');
  if (f.size() != 10) throw std::invalid_argument("bench row needs 10 fields, got " + std::to_string(f.size()));
  auto opt = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
  };
  BenchRow r;
  r.scheme = f[0];
  r.param = f[1];
  r.value = f[2];
  r.N_I = parse_count(f[3]);
  r.N_C = parse_count(f[4]);
  r.N_T = parse_double(f[5]);
  r.rel_cut = opt(f[6]);
  r.rel_iter = opt(f[7]);
  r.rel_time = opt(f[8]);
  r.status = f[9];
  return r;
}

Sweep parse_sweep(const std::string& text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("sweep must look like name=start:stop:step");
  Sweep s;
  s.name = text.substr(0, eq);
  const auto parts = split(text.substr(eq + 1), ':');
  if (parts.size() != 2 && parts.size() != 3) throw std::invalid_argument("sweep must look like name=start:stop:step");
  const double start = parse_double(parts[0]);
  const double stop = parse_double(parts[1]);
  const double step = parts.size() == 3 ? parse_double(parts[2]) : 1.0;
  if (!(step > 0.0) || stop < start) throw std::invalid_argument("sweep needs start <= stop and a positive step");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) throw std::invalid_argument("sweep has too many values");
  for (std::size_t i = 0; i < count; ++i) s.values.push_back(start + static_cast<double>(i) * step);
  return s;
}

std::string report_json(const SolveReport& report, const std::string& scheme, const TwoStageProblem& problem) {
  json doc;
  doc["status"] = to_string(report.status);
  doc["objective"] = number_or_null(report.objective);
  doc["x_star"] = report.x_star;
  doc["scheme"] = scheme;
  doc["problem"] = {{"name", problem.name},
                    {"n", problem.n()},
                    {"m", problem.m()},
                    {"recourse_rows", problem.recourse_rows()},
                    {"N", problem.num_scenarios()}};
  doc["metrics"] = {{"N_I", report.metrics.iterations},
                    {"N_C", report.metrics.optimality_cuts},
                    {"N_T", report.metrics.seconds}};
  json history = json::array();
  for (const auto& r : report.history) {
    history.push_back({{"k", r.k},
                       {"x", r.x},
                       {"lower", number_or_null(r.lower)},
                       {"upper", number_or_null(r.upper)},
                       {"cuts_added", r.cuts_added},
                       {"cuts_skipped", r.cuts_skipped},
                       {"feasibility_cuts", r.feasibility_cuts},
                       {"partition_used", r.partition_used}});
  }
  doc["history"] = history;
  return doc.dump(2) + "\n";
}

void configure_logging() {
  static const bool once = [] {
    auto logger = spdlog::stderr_color_mt("lshaped");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("LSHAPED_LOG")) spdlog::set_level(spdlog::level::from_str(env));
    return true;
  }();
  (void)once;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();
  CLI::App app{"Two-stage stochastic LP solver (L-shaped method with cut aggregation)", "lshaped"};
  app.require_subcommand(1);

  InputOptions in;
  EngineOptions eng;
  std::string output, format = "json";

  auto* solve = app.add_subcommand("solve", "solve one instance and print a JSON report");
  in.attach(solve);
  eng.attach(solve);
  solve->add_option("--output", output, "write the report here instead of stdout");
  solve->add_option("--format", format, "json or csv (iteration history)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  InputOptions bin;
  EngineOptions beng;
  std::string sweep, boutput, bformat = "csv";
  std::size_t repeats = 5;
  auto* bench = app.add_subcommand("bench", "parameter sweep with relative complexities (CSV)");
  bin.attach(bench);
  beng.attach(bench);
  bench->add_option("--sweep", sweep, "name=start:stop:step, e.g. T=1:32:1");
  bench->add_option("--repeats", repeats, "runs per value; N_T is their median")->capture_default_str();
  bench->add_option("--output", boutput, "write the table here instead of stdout");
  bench->add_option("--format", bformat, "csv or json")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  BoundsOptions bo;
  auto* bounds = app.add_subcommand("bounds", "exact worst-case iteration bounds");
  bounds->add_flag("--single", bo.single, "single-cut bound [1+N(b-1)]^m");
  bounds->add_flag("--multi", bo.multi, "multi-cut bound 1+N(b^m-1)");
  bounds->add_flag("--aggregated", bo.aggregated, "static aggregation bound for --sizes");
  bounds->add_flag("--aggregated-upper", bo.aggregated_upper, "upper bound from --A and --AL");
  bounds->add_flag("--dynamic", bo.dynamic, "dynamic aggregation bound (optionally restricted by --lo/--hi)");
  bounds->add_flag("--compare", bo.compare, "single, multi, aggregated and dynamic side by side");
  bounds->add_option("--N", bo.N, "scenario count");
  bounds->add_option("--b", bo.b, "slope number");
  bounds->add_option("--m", bo.m, "second-stage row dimension");
  bounds->add_option("--sizes", bo.sizes, "comma-separated aggregate sizes");
  bounds->add_option("--A", bo.A, "aggregation size");
  bounds->add_option("--AL", bo.AL, "aggregation level");
  bounds->add_option("--A0", bo.A0, "aggregates in the first iteration");
  bounds->add_option("--lo", bo.lo, "smallest aggregation level (default 1)");
  bounds->add_option("--hi", bo.hi, "largest aggregation level (default N)");
  bounds->add_option("--T", bo.T, "uniform block size for --compare (default 1)");

  InputOptions vin;
  auto* validate = app.add_subcommand("validate", "parse and check an instance");
  vin.attach(validate);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) return do_solve(in, eng, output, format, out, err);
    if (bench->parsed()) return do_bench(bin, beng, sweep, repeats, boutput, bformat, out, err);
    if (bounds->parsed()) return do_bounds(bo, out);
    if (validate->parsed()) return do_validate(vin, out);
  } catch (const ParseError& e) {
    for (const auto& d : e.diagnostics()) err << to_string(d) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace lshaped::cli
