#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "lshaped/native_format.hpp"

using namespace lshaped;
using nlohmann::json;

namespace {

std::string data_path(const std::string& name) { return std::string(LSHAPED_DATA_DIR) + "/" + name; }

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("lshaped_cli_" + name);
  std::ofstream(path) << contents;
  return path.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve P1") {
  const Run r = run({"solve", "--input", data_path("p1.json"), "--scheme", "single", "--tol", "1e-6"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["status"] == "Converged");
  CHECK(doc["objective"].get<double>() == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(doc["scheme"] == "single");
  CHECK(doc["problem"]["N"] == 2);
  CHECK(doc["metrics"]["N_I"].get<std::size_t>() == doc["history"].size());
  CHECK(doc["history"][0]["lower"].is_null());
}

TEST_CASE("solve reports partitions") {
  const Run r = run({"solve", "--input", data_path("p1.json"), "--scheme", "partial:T=2"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["objective"].get<double>() == doctest::Approx(3.0).epsilon(1e-6));
  bool saw = false;
  for (const auto& rec : doc["history"])
    for (const auto& part : rec["partition_used"]) {
      CHECK(part == json::array({0, 1}));
      saw = true;
    }
  CHECK(saw);
}

TEST_CASE("objective is written exactly") {
  const Run r = run({"solve", "--input", data_path("newsvendor.json"), "--scheme", "kmedoids:k=3"});
  REQUIRE(r.code == 0);
  const auto tmpl = std::get<StochasticTemplate>(read_native_file(data_path("newsvendor.json")));
  EngineConfig cfg;
  cfg.scheme = parse_scheme("kmedoids:k=3");
  const SolveReport rep = solve_lshaped(enumerate_scenarios(tmpl), cfg);
  CHECK(json::parse(r.out)["objective"].get<double>() == rep.objective);
}

TEST_CASE("SMPS input and sampling") {
  const Run r = run({"solve", "--core", data_path("p1.cor"), "--time", data_path("p1.tim"), "--stoch",
                     data_path("p1.sto"), "--tol", "1e-6"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["objective"].get<double>() == doctest::Approx(3.0).epsilon(1e-6));

  const Run s = run({"solve", "--input", data_path("newsvendor.json"), "--samples", "25", "--seed", "3"});
  REQUIRE(s.code == 0);
  CHECK(json::parse(s.out)["problem"]["N"] == 25);

  CHECK(run({"solve", "--input", data_path("p1.json"), "--samples", "5"}).code == 1);
}

TEST_CASE("csv history and output files") {
  const std::string path = temp_file("report.csv", "");
  const Run r = run({"solve", "--input", data_path("p1.json"), "--format", "csv", "--output", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,lower,upper,cuts_added,cuts_skipped,feasibility_cuts");
}

TEST_CASE("errors and exit codes") {
  const Run missing = run({"solve", "--input", "/nonexistent/p.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("cannot open") != std::string::npos);
  CHECK(run({"solve"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"solve", "--input", data_path("p1.json"), "--scheme", "bogus"}).code == 1);
  CHECK(run({"solve", "--input", data_path("p1.json"), "--max-iters", "1", "--scheme", "single"}).code == 2);

  const std::string infeasible = temp_file("infeasible.json", R"({"version": 1, "name": "inf",
    "first_stage": {"c": [1], "A": [[1]], "b": [3]}, "recourse": {"W": [[1]], "m": 1},
    "scenarios": [{"pi": 1, "q": [1], "T": [[1]], "h": [2]}]})");
  const Run inf = run({"solve", "--input", infeasible});
  CHECK(inf.code == 3);
  CHECK(json::parse(inf.out)["status"] == "MasterInfeasible");
  CHECK(json::parse(inf.out)["objective"].is_null());

  const std::string bad = temp_file("bad.sto", "STOCH P1\nINDEP DISCRETE\n RHS DEM 2.0 0.5\n RHS DEM 4.0 0.3\nENDATA\n");
  const Run b = run({"solve", "--core", data_path("p1.cor"), "--time", data_path("p1.tim"), "--stoch", bad});
  CHECK(b.code == 1);
  CHECK(b.err.find("stoch:3:") != std::string::npos);
}

TEST_CASE("bounds") {
  CHECK(run({"bounds", "--single", "--N", "2", "--b", "2", "--m", "2"}).out == "9\n");
  CHECK(run({"bounds", "--multi", "--N", "2", "--b", "2", "--m", "2"}).out == "7\n");
  CHECK(run({"bounds", "--dynamic", "--N", "2", "--b", "2", "--m", "1", "--A0", "2"}).out == "5\n");
  CHECK(run({"bounds", "--multi", "--N", "1", "--b", "1", "--m", "1"}).out == "1\n");
  CHECK(run({"bounds", "--aggregated", "--sizes", "2,1", "--b", "2", "--m", "1"}).out == "4\n");
  CHECK(run({"bounds", "--aggregated-upper", "--A", "2", "--AL", "2", "--b", "2", "--m", "1"}).out == "5\n");
  const Run cmp = run({"bounds", "--compare", "--N", "4", "--b", "2", "--m", "2"});
  CHECK(cmp.code == 0);
  CHECK(lines(cmp.out).size() == 4);
  CHECK(run({"bounds", "--single", "--multi", "--N", "2", "--b", "2", "--m", "2"}).code == 1);
  CHECK(run({"bounds", "--single", "--N", "0", "--b", "2", "--m", "2"}).code == 1);
  CHECK(run({"bounds", "--dynamic", "--N", "3", "--b", "2", "--m", "1", "--A0", "1", "--lo", "3", "--hi", "2"}).code ==
        1);
}

TEST_CASE("bench sweep") {
  const Run r = run({"bench", "--input", data_path("newsvendor.json"), "--scheme", "partial:T=1", "--sweep",
                     "T=1:18:17", "--repeats", "3"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == cli::kBenchHeader);
  const cli::BenchRow t1 = cli::parse_bench_row(ls[1]);
  const cli::BenchRow t18 = cli::parse_bench_row(ls[2]);
  CHECK(t1.value == "1");
  CHECK(t18.value == "18");

  const auto tmpl = std::get<StochasticTemplate>(read_native_file(data_path("newsvendor.json")));
  const TwoStageProblem p = enumerate_scenarios(tmpl);
  EngineConfig cfg;
  const SolveReport multi = solve_lshaped(p, cfg);
  cfg.scheme = SingleCut{};
  const SolveReport single = solve_lshaped(p, cfg);
  REQUIRE(t1.rel_cut.has_value());
  CHECK(std::abs(*t1.rel_cut - static_cast<double>(t1.N_C) / multi.metrics.optimality_cuts) <= 1e-9);
  CHECK(*t1.rel_cut == doctest::Approx(1.0));
  CHECK(std::abs(*t18.rel_iter - static_cast<double>(t18.N_I) / single.metrics.iterations) <= 1e-9);

  const Run m = run({"bench", "--input", data_path("p1.json"), "--scheme", "multi", "--repeats", "1"});
  REQUIRE(m.code == 0);
  CHECK(*cli::parse_bench_row(lines(m.out)[1]).rel_cut == 1.0);

  const Run j = run({"bench", "--input", data_path("p1.json"), "--scheme", "single", "--repeats", "1", "--format",
                     "json"});
  REQUIRE(j.code == 0);
  CHECK(json::parse(j.out)[0]["rel_iter"] == 1.0);

  CHECK(run({"bench", "--input", data_path("p1.json"), "--scheme", "partial:T=1", "--sweep", "T=1:3"}).code == 1);
  CHECK(run({"bench", "--input", data_path("p1.json"), "--max-iters", "1"}).code == 2);
}

TEST_CASE("bench rows round trip") {
  cli::BenchRow row{"partial", "T", "4", 12, 30, 0.125, 0.5, 2.0, 0.75, "Converged"};
  CHECK(cli::parse_bench_row(cli::format_bench_row(row)) == row);
  cli::BenchRow open{"kmedoids", "k", "3", 5000, 9, 1.0 / 3.0, std::nullopt, std::nullopt, std::nullopt,
                     "IterationLimit"};
  CHECK(cli::parse_bench_row(cli::format_bench_row(open)) == open);
  CHECK_THROWS_AS(cli::parse_bench_row("a,b,c"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_bench_row("a,b,c,x,1,1,,,,s"), std::invalid_argument);
}

TEST_CASE("sweeps") {
  CHECK(cli::parse_sweep("T=1:4:1").values == std::vector<double>{1, 2, 3, 4});
  CHECK(cli::parse_sweep("T=1:32:8").values == std::vector<double>{1, 9, 17, 25});
  CHECK(cli::parse_sweep("tau=0:1:0.5").values == std::vector<double>{0, 0.5, 1});
  CHECK(cli::parse_sweep("k=2:4").values == std::vector<double>{2, 3, 4});
  CHECK(cli::parse_sweep("k=2:4").name == "k");
  for (const char* bad : {"T", "=1:2", "T=1", "T=3:1", "T=1:2:0", "T=a:2"})
    CHECK_THROWS_AS(cli::parse_sweep(bad), std::invalid_argument);
}

TEST_CASE("validate") {
  const Run ok = run({"validate", "--input", data_path("p1.json")});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("ok: P1", 0) == 0);
  const Run bad = run({"validate", "--input", temp_file("bad.json", "{\"version\": 1}")});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("native:1:") != std::string::npos);
}

}
