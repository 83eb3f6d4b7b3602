#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hotspot/local_stats.hpp"
#include "hotspot/series.hpp"
#include "hotspot/types.hpp"

namespace hotspot {

/// Denominators below this are treated as zero by the standardised detectors.
inline constexpr double kDegenerateScale = 1e-12;
/// |rho| is clamped here so the 2x2 correlation matrix stays invertible.
inline constexpr double kRhoClamp = 0.999;

/// Bits of DetectorTrace::flags.
enum TraceFlag : std::uint8_t {
  kFirstDegenerate = 1,   // first component had a ~0 scale and a nonzero numerator
  kSecondDegenerate = 2,  // same for the second component
};

/// Per-time joint detector (t1, t2), local correlation and Mahalanobis
/// distance for one DetectorKind. Element k-1 belongs to time k.
struct DetectorTrace {
  DetectorKind kind = DetectorKind::UniY;
  std::vector<double> t1;
  std::vector<double> t2;
  std::vector<double> rho;
  std::vector<double> d2;
  std::vector<Region> region;
  std::vector<std::uint8_t> flags;
  WindowConfig cfg;

  [[nodiscard]] std::size_t size() const noexcept { return d2.size(); }
};

/// numerator / scale with the 0/0 -> 0 and x/0 -> x/1e-12 conventions.
/// `degenerate` is set when the sentinel branch was taken.
[[nodiscard]] double standardize(double numerator, double scale, bool& degenerate) noexcept;

/// (t1^2 - 2 rho t1 t2 + t2^2) / (1 - rho^2): J' Gamma^{-1} J for the
/// unit-diagonal Gamma with off-diagonal rho.
[[nodiscard]] double mahalanobis(double t1, double t2, double rho) noexcept;

[[nodiscard]] double clamp_rho(double rho) noexcept;

/// T1(k) = dX(k) / S_bar(k).
[[nodiscard]] std::vector<double> t1_trace(const ContinuousSeries& series, const WindowConfig& cfg);
/// T2(k) = dS^2(k) / V_bar(k).
[[nodiscard]] std::vector<double> t2_trace(const ContinuousSeries& series, const WindowConfig& cfg);

/// Joint mean/variance detector of one series; `kind` is UniY or UniX and
/// only labels the result.
[[nodiscard]] DetectorTrace joint_univariate(const ContinuousSeries& series,
                                             const WindowConfig& cfg,
                                             DetectorKind kind = DetectorKind::UniY);

/// Cross-series detector: first component from y, second from x.
[[nodiscard]] DetectorTrace joint_bivariate(const ContinuousSeries& y, const ContinuousSeries& x,
                                            DetectorKind kind, const WindowConfig& cfg);

/// Traces for every requested kind, sharing the window computations. Cross
/// kinds and UniX require `x`.
[[nodiscard]] std::map<DetectorKind, DetectorTrace> detector_traces(
    const ContinuousSeries& y, const ContinuousSeries* x, std::span<const DetectorKind> kinds,
    const WindowConfig& cfg);

}  // namespace hotspot
