#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "hotspot/critical_values.hpp"
#include "hotspot/detectors.hpp"
#include "hotspot/segmentation.hpp"
#include "oracles.hpp"

using namespace hotspot;
using Catch::Approx;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "hotspot_cv_test" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ThresholdRequest request(std::size_t n, double alpha, std::size_t b, std::uint64_t seed) {
  ThresholdRequest req;
  req.n = n;
  req.alpha = alpha;
  req.replications = b;
  req.seed = seed;
  return req;
}

}  // namespace

TEST_CASE("auto grid") {
  const auto g = auto_grid(100);
  REQUIRE(g.size() == 25);
  CHECK(g.front() == 25);
  CHECK(g.back() == 49);
  CHECK(auto_grid(1000).back() == 200);
  CHECK(auto_grid(50).empty());
}

TEST_CASE("degenerate grid is an error") {
  CHECK_THROWS_AS(simulate_threshold(request(50, 0.05, 200, 1)), InvalidArgument);
  auto req = request(100, 0.05, 200, 1);
  req.grid = {80};
  CHECK_THROWS_AS(simulate_threshold(req), InvalidArgument);
  CHECK_THROWS_AS(simulate_threshold(request(100, 0.05, 99, 1)), InvalidArgument);
}

TEST_CASE("threshold is monotone in alpha and deterministic") {
  const auto a = simulate_threshold(request(100, 0.01, 500, 3));
  const auto b = simulate_threshold(request(100, 0.05, 500, 3));
  const auto c = simulate_threshold(request(100, 0.10, 500, 3));
  CHECK(a >= b);
  CHECK(b >= c);
  CHECK(simulate_threshold(request(100, 0.05, 500, 3)) == b);
}

TEST_CASE("quantile convention is the ceil((1-alpha)B)-th order statistic") {
  const auto req = request(100, 0.05, 1000, 1);
  const auto sample = simulate_threshold_sample(req);
  REQUIRE(sample.size() == 1000);
  CHECK(std::is_sorted(sample.begin(), sample.end()));
  CHECK(simulate_threshold(req) == sample[949]);
  CHECK(threshold_from_sample(sample, 0.10) == sample[899]);
  CHECK(upper_order_index(0.05, 1000) == 950);
  CHECK(upper_order_index(0.0, 10) == 10);
  CHECK(upper_order_index(0.999, 10) == 1);
}

TEST_CASE("reference value for n=100, alpha=0.05, B=1000, seed 1") {
  CHECK(simulate_threshold(request(100, 0.05, 1000, 1)) == Approx(3.589922241491631).epsilon(1e-12));
}

TEST_CASE("independent re-implementation agrees on average") {
  double ours = 0.0;
  double theirs = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ours += simulate_threshold(request(100, 0.05, 1000, seed));
    theirs += oracle::threshold(100, 0.05, 1000, seed, 25, 49);
  }
  CHECK(std::abs(ours - theirs) / 20.0 <= 0.05);
}

TEST_CASE("threshold grows with n") {
  double prev = 0.0;
  for (std::size_t n : {60, 100, 200}) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) sum += simulate_threshold(request(n, 0.05, 400, seed));
    CHECK(sum > prev);
    prev = sum;
  }
}

TEST_CASE("fingerprint separates requests") {
  const auto a = request(100, 0.05, 1000, 1);
  auto b = a;
  b.replications = 2000;
  auto c = a;
  c.grid = {25, 30};
  CHECK(a.fingerprint() != b.fingerprint());
  CHECK(a.fingerprint() != c.fingerprint());
  CHECK(a.fingerprint() == request(100, 0.05, 1000, 1).fingerprint());
}

TEST_CASE("cache hit, miss and corruption") {
  const auto dir = fresh_dir("cache");
  ThresholdCache cache(dir / "thresholds.json");
  const auto req = request(100, 0.05, 200, 9);

  const auto first = cache.get_or_compute(req);
  CHECK_FALSE(first.hit);
  const auto second = cache.get_or_compute(req);
  CHECK(second.hit);
  CHECK(second.value == first.value);

  auto other = req;
  other.replications = 300;
  CHECK_FALSE(cache.get_or_compute(other).hit);

  CHECK_FALSE(cache.get_or_compute(req, true).hit);

  {
    std::ofstream f(dir / "thresholds.json", std::ios::trunc);
    f << "{ not json";
  }
  const auto rebuilt = cache.get_or_compute(req);
  CHECK_FALSE(rebuilt.hit);
  CHECK(rebuilt.warnings.size() == 1);
  CHECK(rebuilt.value == first.value);
  CHECK(cache.get_or_compute(req).hit);
}

TEST_CASE("effective threshold by scale") {
  CHECK(effective_threshold(3.5, 20, ThresholdScale::Direct) == 3.5);
  CHECK(effective_threshold(3.5, 20, ThresholdScale::Normalized) == Approx(2.0 * 3.5 * 3.5 / 20.0));
  CHECK(parse_threshold_scale(to_string(ThresholdScale::Normalized)) == ThresholdScale::Normalized);
  CHECK_THROWS_AS(parse_threshold_scale("log"), InvalidArgument);
}

TEST_CASE("null calibration of the univariate pipeline") {
  const double thr = simulate_threshold(request(100, 0.05, 1000, 1));
  WindowConfig cfg;
  cfg.n = 100;
  cfg.bandwidth = 20;
  int detections = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const auto tr = joint_univariate(ContinuousSeries(oracle::gaussian(100, seed)), cfg);
    detections += extract_changepoints(tr, thr).points.empty() ? 0 : 1;
  }
  CHECK(detections / 500.0 <= 0.08);
}
