#pragma once

#include <map>
#include <string>
#include <vector>

#include "hotspot/detectors.hpp"
#include "hotspot/segmentation.hpp"
#include "hotspot/types.hpp"

namespace hotspot {

enum class HotspotMode { Threshold, ConfidenceInterval };

[[nodiscard]] std::string_view to_string(HotspotMode mode) noexcept;

/// Which cross kinds feed the "(*)" / "(**)" slot, and which univariate
/// detector anchors the intersection (UniY unless swapped explicitly).
struct CombinationSpec {
  std::vector<DetectorKind> cross_kinds{kCrossKinds.begin(), kCrossKinds.end()};
  DetectorKind anchor = DetectorKind::UniY;
  HotspotMode mode = HotspotMode::Threshold;

  /// Throws unless cross_kinds is a nonempty, duplicate-free set of cross
  /// kinds and the anchor is UniY or UniX.
  void validate() const;
};

struct HotspotSet {
  std::vector<Interval> intervals;  // sorted, disjoint, non-adjacent
  HotspotMode mode = HotspotMode::Threshold;
  CombinationSpec spec;
  /// Cross kinds that contributed to each interval (same order as intervals).
  std::vector<std::vector<DetectorKind>> provenance;

  [[nodiscard]] bool covers(long k) const noexcept;
  [[nodiscard]] long total_length() const noexcept;
};

/// Sorts, clips to [1, n] and merges overlapping or adjacent intervals.
/// Throws on lo > hi. Intervals entirely outside [1, n] are dropped.
[[nodiscard]] std::vector<Interval> normalize(std::vector<Interval> intervals, long n);

[[nodiscard]] std::vector<Interval> intersect(const std::vector<Interval>& a,
                                              const std::vector<Interval>& b);

/// {k : max over cross kinds of d2(k) > threshold and d2_anchor(k) > threshold}.
[[nodiscard]] HotspotSet hotspots_threshold(const std::map<DetectorKind, DetectorTrace>& traces,
                                            double threshold, const CombinationSpec& spec);

/// (union of the cross kinds' CIs) intersected with (union of anchor CIs).
[[nodiscard]] HotspotSet hotspots_ci(const std::map<DetectorKind, ChangePointSet>& sets,
                                     const CombinationSpec& spec, long n);

}  // namespace hotspot
