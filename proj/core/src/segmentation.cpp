#include "hotspot/segmentation.hpp"

#include <algorithm>
#include <array>

#include "hotspot/detail/parallel.hpp"
#include "hotspot/rng.hpp"

namespace hotspot {

namespace {
constexpr std::uint64_t kBootstrapStream = 0x626f6f7473747270ULL;
}

std::vector<Interval> consecutive_runs(const std::vector<long>& sorted) {
  std::vector<Interval> runs;
  for (long k : sorted) {
    if (!runs.empty() && k == runs.back().hi + 1) {
      runs.back().hi = k;
    } else {
      runs.push_back({k, k});
    }
  }
  return runs;
}

std::vector<Interval> ChangePointSet::exceedance_runs() const {
  return consecutive_runs(exceedance);
}

std::vector<long> screen_local_maxima(const std::vector<double>& d2, double threshold,
                                      std::size_t radius) {
  const auto n = d2.size();
  std::vector<long> points;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(d2[i] > threshold)) continue;
    const std::size_t lo = i >= radius ? i - radius : 0;
    const std::size_t hi = std::min(n - 1, i + radius);
    bool peak = true;
    for (std::size_t j = lo; j <= hi && peak; ++j) {
      // ties go to the earlier index
      if (j < i ? d2[j] >= d2[i] : d2[j] > d2[i]) peak = false;
    }
    if (peak) points.push_back(static_cast<long>(i) + 1);
  }
  return points;
}

ChangePointSet extract_changepoints(const DetectorTrace& trace, double threshold) {
  ChangePointSet cps;
  cps.kind = trace.kind;
  cps.threshold = threshold;
  for (std::size_t i = 0; i < trace.d2.size(); ++i) {
    if (trace.d2[i] > threshold) cps.exceedance.push_back(static_cast<long>(i) + 1);
  }
  cps.points = screen_local_maxima(trace.d2, threshold, trace.cfg.screening_radius());
  for (long k : cps.points) cps.peaks.push_back(trace.d2[static_cast<std::size_t>(k - 1)]);
  return cps;
}

BootstrapDeviations bootstrap_deviations(const ContinuousSeries& y, const ContinuousSeries* x,
                                         DetectorKind kind, const std::vector<long>& points,
                                         const WindowConfig& config, std::size_t replications,
                                         std::uint64_t seed) {
  const auto cfg = resolve_config(config, y.size());
  if (replications < 100) throw InvalidArgument("bootstrap needs at least 100 replications");
  if (kind != DetectorKind::UniY && x == nullptr) {
    throw InvalidArgument("detector kind requires a sensing series");
  }
  if (x != nullptr && x->size() != y.size()) throw InvalidArgument("length mismatch");

  BootstrapDeviations out;
  out.points = points;
  std::sort(out.points.begin(), out.points.end());
  if (out.points.empty()) return out;
  const auto n = static_cast<long>(cfg.n);
  const auto g = static_cast<long>(cfg.bandwidth);
  for (long k : out.points) {
    if (k < 1 || k > n) throw InvalidArgument("change point outside 1..n");
  }

  // Segments {k_{j-1}+1, ..., k_j} with k_0 = 0 and a final segment ending at n.
  std::vector<Interval> segments;
  long start = 1;
  for (long k : out.points) {
    if (k >= start) {
      segments.push_back({start, k});
      start = k + 1;
    }
  }
  if (start <= n) segments.push_back({start, n});
  out.short_segment = std::any_of(segments.begin(), segments.end(),
                                  [](const Interval& s) { return s.length() < 2; });

  const std::size_t count = out.points.size();
  std::vector<std::vector<long>> by_rep(replications, std::vector<long>(count));
  const std::array<DetectorKind, 1> kinds{kind};
  const auto yv = y.values();

  detail::parallel_for(replications, [&](std::size_t b) {
    Rng rng(derive_seed(seed, kBootstrapStream, b));
    std::vector<double> yb(cfg.n);
    std::vector<double> xb(x != nullptr ? cfg.n : 0);
    for (const auto& seg : segments) {
      for (long t = seg.lo; t <= seg.hi; ++t) {
        const auto src = rng.index(static_cast<std::size_t>(seg.lo - 1),
                                   static_cast<std::size_t>(seg.hi - 1));
        yb[static_cast<std::size_t>(t - 1)] = yv[src];
        if (x != nullptr) xb[static_cast<std::size_t>(t - 1)] = x->values()[src];
      }
    }
    const ContinuousSeries ys(std::move(yb));
    std::optional<ContinuousSeries> xs;
    if (x != nullptr) xs.emplace(std::move(xb));
    const auto traces = detector_traces(ys, xs ? &*xs : nullptr, kinds, cfg);
    const auto& d2 = traces.at(kind).d2;

    for (std::size_t j = 0; j < count; ++j) {
      const long k = out.points[j];
      const long lo = std::max(1L, k - g);
      const long hi = std::min(n, k + g);
      long best = lo;
      for (long t = lo + 1; t <= hi; ++t) {
        if (d2[static_cast<std::size_t>(t - 1)] > d2[static_cast<std::size_t>(best - 1)]) best = t;
      }
      by_rep[b][j] = std::abs(best - k);
    }
  });

  out.deviations.assign(count, std::vector<long>(replications));
  for (std::size_t b = 0; b < replications; ++b) {
    for (std::size_t j = 0; j < count; ++j) out.deviations[j][b] = by_rep[b][j];
  }
  for (auto& d : out.deviations) std::sort(d.begin(), d.end());
  return out;
}

ConfidenceIntervals intervals_from_deviations(const BootstrapDeviations& devs, double alpha,
                                              std::size_t n) {
  ConfidenceIntervals out;
  for (std::size_t j = 0; j < devs.points.size(); ++j) {
    const auto& d = devs.deviations[j];
    const long margin = d[upper_order_index(alpha, d.size()) - 1];
    const long k = devs.points[j];
    out.margins.push_back(margin);
    out.cis.push_back({std::max(1L, k - margin), std::min(static_cast<long>(n), k + margin)});
  }
  return out;
}

ConfidenceIntervals bootstrap_cis(const ContinuousSeries& y, const ContinuousSeries* x,
                                  DetectorKind kind, const std::vector<long>& points,
                                  const WindowConfig& cfg, const BootstrapSettings& settings) {
  const auto devs =
      bootstrap_deviations(y, x, kind, points, cfg, settings.replications, settings.seed);
  return intervals_from_deviations(devs, settings.alpha, y.size());
}

void attach_cis(ChangePointSet& cps, const ContinuousSeries& y, const ContinuousSeries* x,
                const WindowConfig& cfg, const BootstrapSettings& settings) {
  const auto devs =
      bootstrap_deviations(y, x, cps.kind, cps.points, cfg, settings.replications, settings.seed);
  auto ci = intervals_from_deviations(devs, settings.alpha, y.size());
  cps.cis = std::move(ci.cis);
  cps.margins = std::move(ci.margins);
  cps.ci_alpha = settings.alpha;
  cps.short_segment = devs.short_segment;
}

}  // namespace hotspot
