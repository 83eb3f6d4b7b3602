#include <catch_amalgamated.hpp>

#include <cmath>

#include "hotspot/segmentation.hpp"
#include "hotspot/simbench.hpp"
#include "oracles.hpp"

using namespace hotspot;

namespace {

WindowConfig window(std::size_t n, std::size_t g) {
  WindowConfig cfg;
  cfg.n = n;
  cfg.bandwidth = g;
  return cfg;
}

std::vector<double> bump(std::size_t n, std::initializer_list<long> peaks, double height,
                         double width) {
  std::vector<double> d(n, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (long p : peaks) {
      const double z = (static_cast<double>(k) - static_cast<double>(p)) / width;
      d[k - 1] += height * std::exp(-0.5 * z * z);
    }
  }
  return d;
}

DetectorTrace trace_of(std::vector<double> d2, std::size_t g) {
  DetectorTrace tr;
  tr.cfg = window(d2.size(), g);
  tr.d2 = std::move(d2);
  return tr;
}

}  // namespace

TEST_CASE("no exceedance gives no points") {
  const auto cps = extract_changepoints(trace_of(std::vector<double>(100, 1.0), 20), 3.0);
  CHECK(cps.points.empty());
  CHECK(cps.exceedance.empty());
}

TEST_CASE("one bump gives its peak") {
  const auto cps = extract_changepoints(trace_of(bump(100, {50}, 10.0, 6.0), 20), 3.0);
  CHECK(cps.points == std::vector<long>{50});
  CHECK(cps.peaks.size() == 1);
  REQUIRE_FALSE(cps.exceedance.empty());
  CHECK(cps.exceedance_runs().size() == 1);
}

TEST_CASE("two bumps give two points") {
  const auto cps = extract_changepoints(trace_of(bump(100, {40, 60}, 10.0, 3.0), 20), 3.0);
  CHECK(cps.points == std::vector<long>{40, 60});
}

TEST_CASE("equal plateau resolves to its first index") {
  std::vector<double> d(100, 0.0);
  for (std::size_t k = 45; k <= 48; ++k) d[k - 1] = 5.0;
  CHECK(screen_local_maxima(d, 1.0, 4) == std::vector<long>{45});
}

TEST_CASE("consecutive runs") {
  CHECK(consecutive_runs({}).empty());
  const auto runs = consecutive_runs({1, 2, 3, 7, 9, 10});
  CHECK(runs == std::vector<Interval>{{1, 3}, {7, 7}, {9, 10}});
}

TEST_CASE("noiseless step has a zero-width interval") {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < 100; ++i) v[i] = (i < 50 ? 0.0 : 1.0) + 1e-6 * std::sin(1.7 * i);
  BootstrapSettings bs;
  bs.replications = 200;
  const auto ci = bootstrap_cis(ContinuousSeries(v), nullptr, DetectorKind::UniY, {50}, window(100, 20), bs);
  REQUIRE(ci.margins.size() == 1);
  CHECK(ci.margins[0] == 0);
  CHECK(ci.cis[0] == Interval{50, 50});
}

TEST_CASE("bootstrap is deterministic, nested in alpha, and clipped") {
  sim::ScenarioSpec spec;
  spec.y_points = {50};
  spec.case_id = 4;
  const auto data = sim::generate(spec, 3);
  const auto cfg = window(100, 20);
  const auto a = bootstrap_deviations(data.y, nullptr, DetectorKind::UniY, {50}, cfg, 300, 11);
  const auto b = bootstrap_deviations(data.y, nullptr, DetectorKind::UniY, {50}, cfg, 300, 11);
  CHECK(a.deviations == b.deviations);
  long prev = -1;
  for (double alpha : {0.5, 0.2, 0.1, 0.05, 0.01, 0.0}) {
    const auto ci = intervals_from_deviations(a, alpha, 100);
    CHECK(ci.margins[0] >= prev);
    CHECK(ci.cis[0].contains(50));
    prev = ci.margins[0];
  }
  CHECK(intervals_from_deviations(a, 0.0, 100).margins[0] == a.deviations[0].back());

  BootstrapDeviations edge;
  edge.points = {3};
  edge.deviations = {{10, 10, 10}};
  const auto clipped = intervals_from_deviations(edge, 0.05, 100);
  CHECK(clipped.cis[0] == Interval{1, 13});
}

TEST_CASE("bootstrap input errors") {
  const ContinuousSeries y(oracle::gaussian(100, 1));
  const auto cfg = window(100, 20);
  CHECK(bootstrap_deviations(y, nullptr, DetectorKind::UniY, {}, cfg, 100, 1).points.empty());
  CHECK_THROWS_AS(bootstrap_deviations(y, nullptr, DetectorKind::UniY, {50}, cfg, 99, 1), InvalidArgument);
  CHECK_THROWS_AS(bootstrap_deviations(y, nullptr, DetectorKind::YX, {50}, cfg, 100, 1), InvalidArgument);
  CHECK_THROWS_AS(bootstrap_deviations(y, nullptr, DetectorKind::UniY, {0}, cfg, 100, 1), InvalidArgument);
}

TEST_CASE("adjacent points flag a short segment") {
  const ContinuousSeries y(oracle::gaussian(100, 4));
  const auto devs = bootstrap_deviations(y, nullptr, DetectorKind::UniY, {50, 51}, window(100, 20), 100, 1);
  CHECK(devs.short_segment);
}

TEST_CASE("coverage of a Case 1 jump at G=40") {
  sim::ScenarioSpec spec;
  spec.y_points = {50};
  const auto cfg = window(100, 40);
  BootstrapSettings bs;
  bs.replications = 200;
  int covered = 0;
  for (std::size_t r = 0; r < 200; ++r) {
    const auto data = sim::generate(spec, r);
    auto cps = extract_changepoints(joint_univariate(data.y, cfg), 3.59);
    if (cps.points.empty()) continue;
    bs.seed = r + 1;
    attach_cis(cps, data.y, nullptr, cfg, bs);
    for (const auto& ci : *cps.cis) {
      if (ci.contains(50)) {
        ++covered;
        break;
      }
    }
  }
  CHECK(covered >= 180);
}
