#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "hotspot/detectors.hpp"
#include "oracles.hpp"

using namespace hotspot;
using Catch::Approx;

namespace {

WindowConfig window(std::size_t n, std::size_t g) {
  WindowConfig cfg;
  cfg.n = n;
  cfg.bandwidth = g;
  return cfg;
}

ContinuousSeries series(const std::vector<double>& v) { return ContinuousSeries(v); }

}  // namespace

TEST_CASE("constant series gives zero detectors without sentinels") {
  const auto tr = joint_univariate(series(std::vector<double>(100, 2.0)), window(100, 20));
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(tr.t1[i] == 0.0);
    CHECK(tr.t2[i] == 0.0);
    CHECK(tr.d2[i] == 0.0);
    CHECK(tr.flags[i] == 0);
  }
}

TEST_CASE("zero scale with a nonzero numerator is flagged") {
  bool deg = false;
  CHECK(standardize(2.0, 0.0, deg) == 2.0 / kDegenerateScale);
  CHECK(deg);
  CHECK(standardize(0.0, 0.0, deg) == 0.0);
  CHECK_FALSE(deg);
  CHECK(standardize(3.0, 2.0, deg) == 1.5);
  CHECK_FALSE(deg);

  // Constant halves at different levels: s_bar is 0 in the interior at the break.
  std::vector<double> v(100, 0.0);
  std::fill(v.begin() + 50, v.end(), 1.0);
  const auto tr = joint_univariate(series(v), window(100, 20));
  CHECK((tr.flags[49] & kFirstDegenerate) != 0);
  CHECK(tr.t1[49] == Approx(1.0 / kDegenerateScale));
}

TEST_CASE("affine maps leave both components unchanged") {
  const auto v = oracle::gaussian(120, 5);
  std::vector<double> w(v.size());
  std::transform(v.begin(), v.end(), w.begin(), [](double x) { return 3.7 * x - 12.0; });
  const auto cfg = window(120, 25);
  const auto a = joint_univariate(series(v), cfg);
  const auto b = joint_univariate(series(w), cfg);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(b.t1[i] == Approx(a.t1[i]).margin(1e-9));
    CHECK(b.t2[i] == Approx(a.t2[i]).margin(1e-9));
  }
}

TEST_CASE("the T1 peak sits at a mean step") {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto v = oracle::gaussian(50, seed, -2.0, 0.1);
    const auto w = oracle::gaussian(50, seed + 5000, 2.0, 0.1);
    v.insert(v.end(), w.begin(), w.end());
    const auto t1 = t1_trace(series(v), window(100, 20));
    std::size_t best = 0;
    for (std::size_t i = 0; i < t1.size(); ++i) {
      if (std::abs(t1[i]) > std::abs(t1[best])) best = i;
    }
    hits += std::abs(static_cast<long>(best + 1) - 50) <= 5 ? 1 : 0;
  }
  CHECK(hits >= 190);
}

TEST_CASE("closed form equals the explicit 2x2 solve") {
  Catch::Generators::RandomFloatingGenerator<double> gen(-5.0, 5.0, 42);
  for (int i = 0; i < 500; ++i) {
    const double t1 = gen.get();
    gen.next();
    const double t2 = gen.get();
    gen.next();
    const double rho = clamp_rho(gen.get() / 5.0);
    gen.next();
    CHECK(mahalanobis(t1, t2, rho) ==
          Approx(oracle::quadratic_form(t1, t2, rho)).epsilon(1e-10).margin(1e-12));
  }
  CHECK(mahalanobis(1.5, -2.0, 0.0) == Approx(1.5 * 1.5 + 4.0));
  CHECK(mahalanobis(0.0, 0.0, 0.7) == 0.0);
}

TEST_CASE("univariate trace matches the oracle") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto v = oracle::gaussian(100, seed);
    const auto tr = joint_univariate(series(v), window(100, 20));
    const auto o = oracle::univariate(v, 20);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(tr.rho[i] == Approx(o.rho[i]).margin(1e-10));
      CHECK(tr.d2[i] == Approx(o.d2[i]).epsilon(1e-10).margin(1e-10));
      CHECK(tr.d2[i] >= 0.0);
      CHECK(std::abs(tr.rho[i]) < 1.0);
    }
  }
}

TEST_CASE("cross traces match the oracle for all four kinds") {
  const auto y = oracle::gaussian(90, 8);
  const auto x = oracle::gaussian(90, 9, 1.0, 2.0);
  const auto cfg = window(90, 15);
  const auto traces = detector_traces(series(y), nullptr, std::array{DetectorKind::UniY}, cfg);
  CHECK(traces.size() == 1);
  const auto xs = series(x);
  const auto all = detector_traces(series(y), &xs, kAllKinds, cfg);
  CHECK(all.size() == 6);
  for (auto kind : kCrossKinds) {
    const auto o = oracle::cross(y, x, kind, 15);
    const auto& tr = all.at(kind);
    const auto single = joint_bivariate(series(y), xs, kind, cfg);
    for (std::size_t i = 0; i < y.size(); ++i) {
      CHECK(tr.t1[i] == Approx(o.t1[i]).margin(1e-10));
      CHECK(tr.t2[i] == Approx(o.t2[i]).margin(1e-10));
      CHECK(tr.rho[i] == Approx(o.rho[i]).margin(1e-10));
      CHECK(tr.d2[i] == Approx(o.d2[i]).epsilon(1e-10).margin(1e-10));
      CHECK(single.d2[i] == tr.d2[i]);
    }
  }
}

TEST_CASE("symmetric data gives rho 0 and d2 = t1^2 + t2^2") {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < 100; ++i) v[i] = i % 2 == 0 ? -1.0 : 1.0;
  v[60] = 3.0;
  v[61] = -3.0;
  const auto tr = joint_univariate(series(v), window(100, 20));
  for (std::size_t k = 20; k <= 40; ++k) {
    CHECK(tr.rho[k - 1] == Approx(0.0).margin(1e-12));
    CHECK(tr.d2[k - 1] == Approx(tr.t1[k - 1] * tr.t1[k - 1] + tr.t2[k - 1] * tr.t2[k - 1]));
  }
}

TEST_CASE("independent symmetric series have YX2 correlation near zero") {
  double sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto y = series(oracle::gaussian(100, seed));
    const auto x = series(oracle::gaussian(100, seed + 777));
    const auto tr = joint_bivariate(y, x, DetectorKind::YX2, window(100, 20));
    double s = 0.0;
    for (std::size_t k = 20; k <= 80; ++k) s += tr.rho[k - 1];
    sum += s / 61.0;
  }
  CHECK(std::abs(sum / 200.0) < 0.05);
}

TEST_CASE("identical series saturate the YX correlation") {
  const auto y = series(oracle::gaussian(100, 12));
  const auto tr = joint_bivariate(y, y, DetectorKind::YX, window(100, 20));
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(tr.rho[i] == Approx(kRhoClamp));
    CHECK(std::isfinite(tr.d2[i]));
  }
}

TEST_CASE("YX is symmetric in its two series") {
  const auto y = series(oracle::gaussian(100, 21));
  const auto x = series(oracle::gaussian(100, 22, 3.0, 0.5));
  const auto cfg = window(100, 20);
  const auto a = joint_bivariate(y, x, DetectorKind::YX, cfg);
  const auto b = joint_bivariate(x, y, DetectorKind::YX, cfg);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(a.t1[i] == b.t2[i]);
    CHECK(a.t2[i] == b.t1[i]);
    CHECK(a.d2[i] == Approx(b.d2[i]).epsilon(1e-14));
  }
}

TEST_CASE("detector argument errors") {
  const auto y = series(oracle::gaussian(100, 1));
  const auto x = series(oracle::gaussian(90, 1));
  const auto cfg = window(100, 20);
  CHECK_THROWS_AS(joint_bivariate(y, x, DetectorKind::YX, cfg), InvalidArgument);
  CHECK_THROWS_AS(detector_traces(y, nullptr, std::array{DetectorKind::YX}, cfg), InvalidArgument);
  CHECK_THROWS_AS(joint_univariate(y, cfg, DetectorKind::YX), InvalidArgument);
  CHECK_THROWS_AS(joint_bivariate(y, y, DetectorKind::UniX, cfg), InvalidArgument);
}

TEST_CASE("kind names") {
  for (auto kind : kAllKinds) CHECK(parse_kind(to_string(kind)) == kind);
  CHECK(parse_kind("YX²") == DetectorKind::YX2);
  CHECK(parse_kind("Y²X²") == DetectorKind::Y2X2);
  CHECK_THROWS_AS(parse_kind("XY"), InvalidArgument);
}
