#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "hotspot/series.hpp"
#include "hotspot/simbench.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using Catch::Matchers::ContainsSubstring;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = hotspot::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "hotspot_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Stress codes plus sensing values of the first worked example, seed 1.
fs::path example_csv(const fs::path& dir) {
  const auto ill = hotspot::sim::illustration_data(1, 1);
  const auto path = dir / "pair.csv";
  std::ofstream f(path);
  f << "day,stress,steps\n";
  for (std::size_t t = 0; t < 100; ++t) {
    f << t + 1 << ',' << ill.stress.values()[t] << ','
      << hotspot::format_double(ill.sensing.values()[t]) << '\n';
  }
  return path;
}

fs::path noise_csv(const fs::path& dir, std::size_t n) {
  const auto y = oracle::gaussian(n, 1);
  const auto x = oracle::gaussian(n, 2);
  const auto path = dir / "noise.csv";
  std::ofstream f(path);
  f << "y,x\n";
  for (std::size_t t = 0; t < n; ++t) f << hotspot::format_double(y[t]) << ',' << hotspot::format_double(x[t]) << '\n';
  return path;
}

std::vector<std::string> common(const fs::path& dir) {
  return {"--cache-dir", (dir / "cache").string()};
}

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("detect writes one trace per requested kind and a report") {
  const auto dir = scratch("detect");
  const auto in = noise_csv(dir, 100);
  const auto r = run(cat({"detect", "--input", in.string(), "--stress-col", "y", "--sensing-col", "x",
                          "--bandwidth", "40", "--kinds", "UniY,YX2", "--out", (dir / "o").string()},
                         common(dir)));
  REQUIRE(r.code == 0);
  std::vector<std::string> traces;
  for (const auto& e : fs::directory_iterator(dir / "o")) {
    const auto name = e.path().filename().string();
    if (name.rfind("trace_", 0) == 0) traces.push_back(name);
  }
  std::sort(traces.begin(), traces.end());
  CHECK(traces == std::vector<std::string>{"trace_UniY.csv", "trace_YX2.csv"});
  const auto doc = json::parse(slurp(dir / "o" / "changepoints.json"));
  CHECK(doc["config"]["bandwidth"] == 40);
  CHECK(doc["config"]["seed"] == 1);
  CHECK(doc["changepoints"].size() == 2);
  const auto trace = slurp(dir / "o" / "trace_UniY.csv");
  CHECK(trace.rfind("# config: {", 0) == 0);
  CHECK_THAT(trace, ContainsSubstring("\nk,t1,t2,rho,d2,region,flags\n"));
}

TEST_CASE("bandwidth too large is a runtime error") {
  const auto dir = scratch("toolarge");
  const auto in = noise_csv(dir, 50);
  const auto r = run(cat({"detect", "--input", in.string(), "--stress-col", "y", "-G", "40", "--out",
                          (dir / "o").string()},
                         common(dir)));
  CHECK(r.code == hotspot::cli::kExitRuntime);
  CHECK_THAT(r.err, ContainsSubstring("bandwidth too large"));
}

TEST_CASE("detect is byte-identical across reruns") {
  const auto dir = scratch("rerun");
  const auto in = example_csv(dir);
  const auto args = cat({"detect", "--input", in.string(), "--discrete", "--sensing-col", "steps", "-G", "20",
                         "--ci", "--boot-reps", "200", "--seed", "7"},
                        common(dir));
  REQUIRE(run(cat(args, {"--out", (dir / "a").string()})).code == 0);
  REQUIRE(run(cat(args, {"--out", (dir / "b").string()})).code == 0);
  for (const auto* f : {"changepoints.json", "trace_YX.csv", "moments_stress.csv", "transform.json"}) {
    INFO(f);
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const auto doc = json::parse(slurp(dir / "a" / "changepoints.json"));
  CHECK(doc["config"]["seed"] == 7);
  CHECK(doc["config"]["transform_seed"] == 1);
  for (const auto& cps : doc["changepoints"]) {
    if (!cps["points"].empty()) CHECK(cps["cis"].size() == cps["points"].size());
  }
}

TEST_CASE("thresholding hotspot on the first worked example matches the golden file") {
  const auto dir = scratch("golden");
  const auto in = example_csv(dir);
  const auto r = run(cat({"hotspot", "--input", in.string(), "--discrete", "--sensing-col", "steps", "-G", "20",
                          "--mode", "threshold", "--out", (dir / "o").string()},
                         common(dir)));
  REQUIRE(r.code == 0);
  const auto produced = json::parse(slurp(dir / "o" / "hotspots.json"));
  bool covers = false;
  for (const auto& iv : produced["hotspots"]["intervals"]) {
    covers |= iv["lo"].get<long>() <= 50 && 50 <= iv["hi"].get<long>();
  }
  CHECK(covers);
  // Paths differ per machine; everything else must match.
  auto stable = produced;
  stable["config"].erase("input");
  const auto golden = json::parse(slurp(fs::path(HOTSPOT_GOLDEN_DIR) / "hotspot_threshold.json"));
  CHECK(stable == golden);
  CHECK_THAT(r.out, ContainsSubstring("G\tUniY\tYX\tYX2\tY2X\tY2X2\tThrs\n20\t"));
  const auto shading = slurp(dir / "o" / "shading.csv");
  CHECK_THAT(shading, ContainsSubstring("\nk,hotspot\n"));
}

TEST_CASE("CI hotspot reports intervals and per-point CIs") {
  const auto dir = scratch("ci");
  const auto in = example_csv(dir);
  const auto r = run(cat({"hotspot", "--input", in.string(), "--discrete", "--sensing-col", "steps", "-G", "20",
                          "--mode", "ci", "--boot-reps", "200", "--out", (dir / "o").string()},
                         common(dir)));
  REQUIRE(r.code == 0);
  const auto doc = json::parse(slurp(dir / "o" / "hotspots.json"));
  CHECK(doc["hotspots"]["mode"] == "ci");
  CHECK(doc["hotspots"].contains("intervals"));
  for (const auto& cps : doc["changepoints"]) {
    REQUIRE(cps.contains("cis"));
    CHECK(cps["cis"].size() == cps["points"].size());
  }
}

TEST_CASE("no detections give an empty hotspot and success") {
  const auto dir = scratch("empty");
  {
    std::ofstream f(dir / "flat.csv");
    f << "stress,x\n";
    for (int t = 0; t < 100; ++t) f << "1.5,2\n";
  }
  const auto r = run(cat({"hotspot", "--input", (dir / "flat.csv").string(), "--sensing-col", "x", "-G", "20",
                          "--format", "csv", "--out", (dir / "o").string()},
                         common(dir)));
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "o" / "hotspots.csv");
  CHECK(csv.substr(csv.find('\n') + 1) == "lo,hi,length,kinds\n");
}

TEST_CASE("simulate emits a table and rejects bad ids") {
  const auto dir = scratch("simulate");
  const auto r = run(cat({"simulate", "--table", "1", "--replications", "10", "--cases", "1,2", "--out",
                          (dir / "t1.csv").string(), "--audit", (dir / "audit.json").string()},
                         common(dir)));
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "t1.csv");
  CHECK(csv.rfind("# config: {", 0) == 0);
  CHECK_THAT(csv, ContainsSubstring("table,scenario,method,G,metric,case1,case2\n"));
  CHECK_THAT(r.err, ContainsSubstring("simulate: table 1"));
  const auto audit = json::parse(slurp(dir / "audit.json"));
  CHECK(audit["cells"].size() == 3 * 2 * 2);
  CHECK(audit["cells"][0]["replications"].size() == 10);

  CHECK(run({"simulate", "--table", "4"}).code == hotspot::cli::kExitUsage);
}

TEST_CASE("threshold is stable across cache hits") {
  const auto dir = scratch("threshold");
  const auto a = run(cat({"threshold", "--n", "100", "--threshold-reps", "200"}, common(dir)));
  const auto b = run(cat({"threshold", "--n", "100", "--threshold-reps", "200"}, common(dir)));
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK_THAT(a.err, ContainsSubstring("computed"));
  CHECK_THAT(b.err, ContainsSubstring("cache hit"));
  const auto c = run(cat({"threshold", "--n", "100", "--threshold-reps", "200", "--no-cache"}, common(dir)));
  CHECK(c.out == a.out);
  CHECK(json::parse(a.out)["critical_value"].get<double>() > 0.0);
}

TEST_CASE("illustrate writes plot data") {
  const auto dir = scratch("illustrate");
  const auto r = run(cat({"illustrate", "--scenario", "1", "--boot-reps", "200", "--out", (dir / "o").string()},
                         common(dir)));
  REQUIRE(r.code == 0);
  for (const auto* f : {"data.csv", "shading.csv", "illustration.json", "trace_Y2X2.csv"}) {
    CHECK(fs::exists(dir / "o" / f));
  }
  CHECK_THAT(r.out, ContainsSubstring("truth\tstress 50\tsensing 55"));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == hotspot::cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == hotspot::cli::kExitUsage);
  CHECK(run({"detect", "--bandwidth", "20", "--out", "x"}).code == hotspot::cli::kExitUsage);
  const auto dir = scratch("usage");
  const auto in = noise_csv(dir, 100);
  CHECK(run({"detect", "--input", in.string(), "--stress-col", "y", "-G", "20", "--out", "x", "--format", "xml"})
            .code == hotspot::cli::kExitUsage);
  CHECK(run({"hotspot", "--input", in.string(), "--stress-col", "y", "-G", "20", "--out", "x"}).code ==
        hotspot::cli::kExitUsage);
  CHECK(run({"detect", "--input", in.string(), "--stress-col", "y", "-G", "20", "--out", "x", "--kinds", "YX"})
            .code == hotspot::cli::kExitUsage);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--version"}).code == 0);
}

TEST_CASE("missing column is a runtime error") {
  const auto dir = scratch("column");
  const auto in = noise_csv(dir, 100);
  const auto r = run(cat({"detect", "--input", in.string(), "--stress-col", "nope", "-G", "20", "--out",
                          (dir / "o").string()},
                         common(dir)));
  CHECK(r.code == hotspot::cli::kExitRuntime);
  CHECK_THAT(r.err, ContainsSubstring("missing column 'nope'"));
}
