#include "hotspot/report.hpp"

namespace hotspot {

std::string_view to_string(Region region) noexcept {
  switch (region) {
    case Region::LeftBoundary: return "left";
    case Region::Interior: return "interior";
    case Region::RightBoundary: return "right";
  }
  return "interior";
}

nlohmann::json to_json(const Interval& iv) { return nlohmann::json::array({iv.lo, iv.hi}); }

nlohmann::json to_json(const WindowConfig& cfg) {
  return {{"bandwidth", cfg.bandwidth}, {"n", cfg.n}, {"eta", cfg.eta}, {"alpha", cfg.alpha}};
}

nlohmann::json to_json(const ChangePointSet& cps) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(cps.kind));
  j["threshold"] = cps.threshold;
  j["points"] = cps.points;
  j["peaks"] = cps.peaks;
  auto runs = nlohmann::json::array();
  for (const auto& iv : cps.exceedance_runs()) runs.push_back(to_json(iv));
  j["exceedance_runs"] = runs;
  if (cps.cis) {
    auto cis = nlohmann::json::array();
    for (const auto& iv : *cps.cis) cis.push_back(to_json(iv));
    j["cis"] = cis;
    j["margins"] = cps.margins ? nlohmann::json(*cps.margins) : nlohmann::json::array();
    j["ci_alpha"] = cps.ci_alpha;
    j["short_segment"] = cps.short_segment;
  }
  return j;
}

nlohmann::json to_json(const HotspotSet& set) {
  nlohmann::json j;
  j["mode"] = std::string(to_string(set.mode));
  std::vector<std::string> kinds;
  for (auto k : set.spec.cross_kinds) kinds.emplace_back(to_string(k));
  j["cross_kinds"] = kinds;
  j["anchor"] = std::string(to_string(set.spec.anchor));
  auto intervals = nlohmann::json::array();
  for (std::size_t i = 0; i < set.intervals.size(); ++i) {
    std::vector<std::string> from;
    if (i < set.provenance.size()) {
      for (auto k : set.provenance[i]) from.emplace_back(to_string(k));
    }
    intervals.push_back({{"lo", set.intervals[i].lo},
                         {"hi", set.intervals[i].hi},
                         {"length", set.intervals[i].length()},
                         {"kinds", from}});
  }
  j["intervals"] = intervals;
  j["total_length"] = set.total_length();
  return j;
}

nlohmann::json to_json(const TransformRecord& record) {
  return {{"seed", record.seed},
          {"pmf", record.pmf},
          {"cdf_left", record.cdf_left},
          {"w", record.w},
          {"u", record.u}};
}

void write_trace_csv(std::ostream& out, const DetectorTrace& trace) {
  out << "k,t1,t2,rho,d2,region,flags\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << i + 1 << ',' << format_double(trace.t1[i]) << ',' << format_double(trace.t2[i]) << ','
        << format_double(trace.rho[i]) << ',' << format_double(trace.d2[i]) << ','
        << to_string(trace.region[i]) << ',' << static_cast<int>(trace.flags[i]) << '\n';
  }
}

void write_moments_csv(std::ostream& out, const LocalMoments& m) {
  out << "k,d_mean,d_var,s_bar,v_bar,k_bar,region\n";
  for (std::size_t i = 0; i < m.d_mean.size(); ++i) {
    out << i + 1 << ',' << format_double(m.d_mean[i]) << ',' << format_double(m.d_var[i]) << ','
        << format_double(m.s_bar[i]) << ',' << format_double(m.v_bar[i]) << ','
        << format_double(m.k_bar[i]) << ',' << to_string(m.region[i]) << '\n';
  }
}

void write_transform_csv(std::ostream& out, const DiscreteSeries& series,
                         const TransformRecord& record) {
  out << "t,y,w,u,cdf_left,pmf\n";
  for (std::size_t i = 0; i < record.u.size(); ++i) {
    const int y = series.values()[i];
    const auto idx = static_cast<std::size_t>(y - 1);
    out << i + 1 << ',' << y << ',' << format_double(record.w[i]) << ','
        << format_double(record.u[i]) << ',' << format_double(record.cdf_left[idx]) << ','
        << format_double(record.pmf[idx]) << '\n';
  }
}

void write_shading_csv(std::ostream& out, const HotspotSet& set, long n) {
  out << "k,hotspot\n";
  for (long k = 1; k <= n; ++k) out << k << ',' << (set.covers(k) ? 1 : 0) << '\n';
}

}  // namespace hotspot
