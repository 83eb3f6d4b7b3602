#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hotspot/detectors.hpp"
#include "hotspot/series.hpp"
#include "hotspot/types.hpp"

namespace hotspot {

/// Screened change points of one detector kind (1-based times).
struct ChangePointSet {
  DetectorKind kind = DetectorKind::UniY;
  std::vector<long> points;      // sorted
  std::vector<double> peaks;     // d2 at each point
  std::vector<long> exceedance;  // every k with d2(k) > threshold, sorted
  double threshold = 0.0;
  std::optional<std::vector<Interval>> cis;  // one per point once bootstrapped
  std::optional<std::vector<long>> margins;  // M_j(alpha)
  double ci_alpha = 0.05;
  bool short_segment = false;  // a bootstrap segment had fewer than 2 points

  [[nodiscard]] std::vector<Interval> exceedance_runs() const;
};

/// Maximal runs of consecutive integers in a sorted list.
[[nodiscard]] std::vector<Interval> consecutive_runs(const std::vector<long>& sorted);

/// Threshold exceedances that are the maximum of d2 over their own closed
/// +-ceil(eta G) neighbourhood; on equal values the earlier index wins, so
/// emitted points are always more than ceil(eta G) apart.
[[nodiscard]] ChangePointSet extract_changepoints(const DetectorTrace& trace, double threshold);

/// Same screening on a raw d2 array (element k-1 is time k).
[[nodiscard]] std::vector<long> screen_local_maxima(const std::vector<double>& d2,
                                                    double threshold, std::size_t radius);

struct BootstrapSettings {
  std::size_t replications = 1000;  // B
  std::uint64_t seed = 1;
  double alpha = 0.05;
};

/// Per point, the B absolute deviations |k_j^(b) - k_j| sorted ascending.
struct BootstrapDeviations {
  std::vector<long> points;
  std::vector<std::vector<long>> deviations;
  bool short_segment = false;
};

/// Resamples whole (Y_t, X_t) tuples with replacement inside each segment
/// between consecutive points, recomputes the trace of `kind`, and records
/// where its argmax over [k_j - G, k_j + G] lands. `x` may be null for UniY.
[[nodiscard]] BootstrapDeviations bootstrap_deviations(const ContinuousSeries& y,
                                                       const ContinuousSeries* x,
                                                       DetectorKind kind,
                                                       const std::vector<long>& points,
                                                       const WindowConfig& cfg,
                                                       std::size_t replications,
                                                       std::uint64_t seed);

/// M_j = ceil((1-alpha) B)-th smallest deviation; CI_j = [k_j - M_j, k_j + M_j]
/// clipped to [1, n]. alpha = 0 gives the maximum deviation.
struct ConfidenceIntervals {
  std::vector<Interval> cis;
  std::vector<long> margins;
};
[[nodiscard]] ConfidenceIntervals intervals_from_deviations(const BootstrapDeviations& devs,
                                                            double alpha, std::size_t n);

[[nodiscard]] ConfidenceIntervals bootstrap_cis(const ContinuousSeries& y,
                                                const ContinuousSeries* x, DetectorKind kind,
                                                const std::vector<long>& points,
                                                const WindowConfig& cfg,
                                                const BootstrapSettings& settings);

/// Runs bootstrap_cis and stores the result in `cps`.
void attach_cis(ChangePointSet& cps, const ContinuousSeries& y, const ContinuousSeries* x,
                const WindowConfig& cfg, const BootstrapSettings& settings);

}  // namespace hotspot
