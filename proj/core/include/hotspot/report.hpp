#pragma once

#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "hotspot/detectors.hpp"
#include "hotspot/hotspots.hpp"
#include "hotspot/local_stats.hpp"
#include "hotspot/segmentation.hpp"
#include "hotspot/series.hpp"

namespace hotspot {

[[nodiscard]] nlohmann::json to_json(const Interval& iv);
[[nodiscard]] nlohmann::json to_json(const WindowConfig& cfg);
[[nodiscard]] nlohmann::json to_json(const ChangePointSet& cps);
[[nodiscard]] nlohmann::json to_json(const HotspotSet& set);
[[nodiscard]] nlohmann::json to_json(const TransformRecord& record);

/// k,t1,t2,rho,d2,region,flags
void write_trace_csv(std::ostream& out, const DetectorTrace& trace);
/// k,d_mean,d_var,s_bar,v_bar,k_bar,region
void write_moments_csv(std::ostream& out, const LocalMoments& moments);
/// t,w,u,cdf_left,pmf_at
void write_transform_csv(std::ostream& out, const DiscreteSeries& series,
                         const TransformRecord& record);
/// k,hotspot (0/1) for k = 1..n, suitable for shading a plot.
void write_shading_csv(std::ostream& out, const HotspotSet& set, long n);

[[nodiscard]] std::string_view to_string(Region region) noexcept;

}  // namespace hotspot
