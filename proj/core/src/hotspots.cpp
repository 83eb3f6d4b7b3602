#include "hotspot/hotspots.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hotspot {

std::string_view to_string(HotspotMode mode) noexcept {
  return mode == HotspotMode::Threshold ? "threshold" : "ci";
}

void CombinationSpec::validate() const {
  if (cross_kinds.empty()) throw InvalidArgument("combination needs at least one cross kind");
  std::set<DetectorKind> seen;
  for (auto kind : cross_kinds) {
    if (!is_cross(kind)) {
      throw InvalidArgument(std::string(to_string(kind)) + " is not a cross kind");
    }
    if (!seen.insert(kind).second) {
      throw InvalidArgument("duplicate cross kind " + std::string(to_string(kind)));
    }
  }
  if (is_cross(anchor)) throw InvalidArgument("anchor must be UniY or UniX");
}

bool HotspotSet::covers(long k) const noexcept {
  return std::any_of(intervals.begin(), intervals.end(),
                     [k](const Interval& iv) { return iv.contains(k); });
}

long HotspotSet::total_length() const noexcept {
  long total = 0;
  for (const auto& iv : intervals) total += iv.length();
  return total;
}

std::vector<Interval> normalize(std::vector<Interval> intervals, long n) {
  for (const auto& iv : intervals) {
    if (iv.lo > iv.hi) {
      throw InvalidArgument("interval [" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) +
                            "] has lo > hi");
    }
  }
  std::vector<Interval> clipped;
  for (auto iv : intervals) {
    iv.lo = std::max(iv.lo, 1L);
    iv.hi = std::min(iv.hi, n);
    if (iv.lo <= iv.hi) clipped.push_back(iv);
  }
  std::sort(clipped.begin(), clipped.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const auto& iv : clipped) {
    if (!merged.empty() && iv.lo <= merged.back().hi + 1) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const long lo = std::max(a[i].lo, b[j].lo);
    const long hi = std::min(a[i].hi, b[j].hi);
    if (lo <= hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

namespace {

bool overlaps(const Interval& a, const Interval& b) { return a.lo <= b.hi && b.lo <= a.hi; }

}  // namespace

HotspotSet hotspots_threshold(const std::map<DetectorKind, DetectorTrace>& traces,
                              double threshold, const CombinationSpec& spec) {
  spec.validate();
  const auto anchor_it = traces.find(spec.anchor);
  if (anchor_it == traces.end()) {
    throw InvalidArgument("missing trace for " + std::string(to_string(spec.anchor)));
  }
  const auto& anchor = anchor_it->second;
  const auto n = anchor.size();
  std::vector<const DetectorTrace*> cross;
  for (auto kind : spec.cross_kinds) {
    const auto it = traces.find(kind);
    if (it == traces.end()) {
      throw InvalidArgument("missing trace for " + std::string(to_string(kind)));
    }
    if (it->second.size() != n) throw InvalidArgument("traces disagree on n");
    cross.push_back(&it->second);
  }

  std::vector<long> hits;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(anchor.d2[i] > threshold)) continue;
    double best = -1.0;
    for (const auto* tr : cross) best = std::max(best, tr->d2[i]);
    if (best > threshold) hits.push_back(static_cast<long>(i) + 1);
  }

  HotspotSet out;
  out.mode = HotspotMode::Threshold;
  out.spec = spec;
  out.intervals = consecutive_runs(hits);
  for (const auto& iv : out.intervals) {
    std::vector<DetectorKind> kinds;
    for (const auto* tr : cross) {
      for (long k = iv.lo; k <= iv.hi; ++k) {
        if (tr->d2[static_cast<std::size_t>(k - 1)] > threshold) {
          kinds.push_back(tr->kind);
          break;
        }
      }
    }
    out.provenance.push_back(std::move(kinds));
  }
  return out;
}

HotspotSet hotspots_ci(const std::map<DetectorKind, ChangePointSet>& sets,
                       const CombinationSpec& spec, long n) {
  spec.validate();
  const auto require = [&](DetectorKind kind) -> const ChangePointSet& {
    const auto it = sets.find(kind);
    if (it == sets.end()) {
      throw InvalidArgument("missing change points for " + std::string(to_string(kind)));
    }
    if (!it->second.cis) {
      throw InvalidArgument("change points for " + std::string(to_string(kind)) +
                            " carry no confidence intervals");
    }
    return it->second;
  };

  const auto& anchor = require(spec.anchor);
  std::vector<Interval> cross_union;
  std::vector<std::pair<DetectorKind, std::vector<Interval>>> per_kind;
  for (auto kind : spec.cross_kinds) {
    const auto& cps = require(kind);
    if (std::abs(cps.ci_alpha - anchor.ci_alpha) > 1e-12) {
      throw InvalidArgument("confidence intervals were built at different levels");
    }
    cross_union.insert(cross_union.end(), cps.cis->begin(), cps.cis->end());
    per_kind.emplace_back(kind, normalize(*cps.cis, n));
  }

  HotspotSet out;
  out.mode = HotspotMode::ConfidenceInterval;
  out.spec = spec;
  out.intervals = intersect(normalize(std::move(cross_union), n), normalize(*anchor.cis, n));
  for (const auto& iv : out.intervals) {
    std::vector<DetectorKind> kinds;
    for (const auto& [kind, cis] : per_kind) {
      if (std::any_of(cis.begin(), cis.end(), [&](const Interval& c) { return overlaps(c, iv); })) {
        kinds.push_back(kind);
      }
    }
    out.provenance.push_back(std::move(kinds));
  }
  return out;
}

}  // namespace hotspot
