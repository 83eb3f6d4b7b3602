#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hotspot/critical_values.hpp"
#include "hotspot/hotspots.hpp"
#include "hotspot/series.hpp"
#include "hotspot/types.hpp"

namespace hotspot::sim {

/// Signal strength of a simulation case: segment means alternate -mu, +mu and
/// noise standard deviations alternate sigma_min, sigma_max.
struct CaseParams {
  double mu = 2.0;
  double sigma_min = 0.1;
  double sigma_max = 0.4;
};

/// Cases 1-6 (1 strongest, 6 weakest).
[[nodiscard]] CaseParams case_params(int case_id);

/// How segment parameters are assigned. Alternating: means -mu, +mu, ... and
/// sds sigma_min, sigma_max, ...; Uniform: each segment draws its mean from
/// U(-mu, mu) and its sd from U(sigma_min, sigma_max).
enum class SegmentDesign { Alternating, Uniform };

[[nodiscard]] std::string_view to_string(SegmentDesign design) noexcept;
[[nodiscard]] SegmentDesign parse_design(std::string_view name);

struct ScenarioSpec {
  std::size_t n = 100;
  std::vector<long> y_points;                   // change points of Y before the shift
  std::optional<std::vector<long>> x_points;    // present for bivariate scenarios
  long delta = 0;                               // Y's points are shifted by delta
  int case_id = 1;
  SegmentDesign design = SegmentDesign::Alternating;
  std::size_t replications = 500;
  std::uint64_t seed = 1;

  [[nodiscard]] CaseParams params() const { return case_params(case_id); }
  [[nodiscard]] std::vector<long> shifted_y_points() const;
  void validate() const;
};

struct SimulatedData {
  ContinuousSeries y;
  std::optional<ContinuousSeries> x;
};

/// Piecewise-stationary Gaussian series delimited by `points`: segment s has
/// mean (-1)^(s+1) mu and sd sigma_min / sigma_max alternating, starting at
/// (-mu, sigma_min).
[[nodiscard]] ContinuousSeries piecewise_gaussian(std::size_t n, const std::vector<long>& points,
                                                  const CaseParams& params, std::uint64_t seed,
                                                  SegmentDesign design = SegmentDesign::Alternating);

/// Replication `index` of the scenario; Y and X use independent noise streams.
[[nodiscard]] SimulatedData generate(const ScenarioSpec& spec, std::size_t index);

/// Seed for the per-replication bootstrap or any other auxiliary stream.
[[nodiscard]] std::uint64_t replication_seed(const ScenarioSpec& spec, std::size_t index,
                                             std::uint64_t stream);

// ---------------------------------------------------------------------------
// Metrics

struct PowerFdr {
  double power = 0.0;
  double fdr = 0.0;
};

/// power: fraction of replications where every true point has an estimate
/// within eta_power. fdr: among replications with an estimate, the fraction
/// where every estimate is farther than eta_fdr from every true point.
[[nodiscard]] PowerFdr power_fdr(const std::vector<std::vector<long>>& estimates,
                                 const std::vector<long>& truth, long eta_power, long eta_fdr);

struct HitLength {
  double hit_rate = 0.0;
  double mean_length = 0.0;  // over replications with at least one hotspot
  std::size_t length_count = 0;
};

/// Per replication: score = covered truths / number of truths; length =
/// total length of the distinct intervals containing true points, or n when
/// any true point is uncovered. Replications without hotspots count toward
/// the hit rate (score 0) but not toward the mean length.
[[nodiscard]] HitLength hit_rate_and_length(const std::vector<std::vector<Interval>>& hotspots,
                                            const std::vector<long>& truth, long n);

/// One replication's length and score, exposed for audit logs.
[[nodiscard]] std::pair<double, std::optional<long>> hit_and_length(
    const std::vector<Interval>& hotspots, const std::vector<long>& truth, long n);

struct ReplicationRecord {
  std::size_t index = 0;
  std::vector<long> estimates;
  std::vector<Interval> hotspots;
  double score = 0.0;
};

struct MetricReport {
  double power = 0.0;
  double fdr = 0.0;
  double hit_rate = 0.0;
  double mean_interval_length = 0.0;
  long eta_power = 5;
  long eta_fdr = 5;
  std::vector<ReplicationRecord> replications;
};

// ---------------------------------------------------------------------------
// Pipelines

/// A change-point method under test: returns 1-based estimates for one
/// replication. Cross-series methods receive a non-null x.
using Detector =
    std::function<std::vector<long>(const ContinuousSeries& y, const ContinuousSeries* x)>;

struct PipelineConfig {
  std::size_t bandwidth = 20;
  double eta = 0.2;
  double alpha = 0.05;
  double threshold = 0.0;                 // D_n(G, alpha)
  std::size_t bootstrap_replications = 1000;
};

/// Joint mean/variance detector on y alone.
[[nodiscard]] std::vector<long> joint_mosum_points(const ContinuousSeries& y,
                                                   const PipelineConfig& cfg);

/// All four cross kinds, pooled; points within ceil(eta G) of a stronger
/// point (larger d2) are dropped.
[[nodiscard]] std::vector<long> bi_mosum_ensemble_points(const ContinuousSeries& y,
                                                         const ContinuousSeries& x,
                                                         const PipelineConfig& cfg);

[[nodiscard]] Detector joint_mosum_detector(PipelineConfig cfg);
[[nodiscard]] Detector bi_mosum_detector(PipelineConfig cfg);

/// Power/FDR of `detector` over spec.replications. Truth is Y's points, or
/// Y's and X's points pooled for bivariate scenarios.
[[nodiscard]] MetricReport evaluate_detector(const ScenarioSpec& spec, const Detector& detector,
                                             long eta_power, long eta_fdr);

/// Hotspots of one replication under the given rule (full four-kind union,
/// UniY anchor). `bootstrap_seed` is used by the CI rule only.
[[nodiscard]] HotspotSet hotspot_pipeline(const ContinuousSeries& y, const ContinuousSeries& x,
                                          const PipelineConfig& cfg, HotspotMode mode,
                                          std::uint64_t bootstrap_seed);

/// Hit rate / interval length against Y's (shifted) points.
[[nodiscard]] MetricReport evaluate_hotspots(const ScenarioSpec& spec, const PipelineConfig& cfg,
                                             HotspotMode mode);

// ---------------------------------------------------------------------------
// Tables

struct TableOptions {
  int table_id = 1;
  std::size_t replications = 500;
  std::uint64_t seed = 1;
  std::vector<std::size_t> bandwidths{20, 40};
  std::vector<int> cases{1, 2, 3, 4, 5, 6};
  std::size_t n = 100;
  double threshold = 0.0;  // D_n, computed by the caller for (n, alpha)
  ThresholdScale scale = ThresholdScale::Direct;
  double alpha = 0.05;
  double eta = 0.2;
  std::size_t bootstrap_replications = 1000;
  SegmentDesign design = SegmentDesign::Alternating;
  bool keep_records = false;  // retain per-replication records in each row
};

/// One output row: a scenario / method / bandwidth / metric with a value per case.
struct TableRow {
  std::string scenario;
  std::string method;
  std::size_t bandwidth = 0;
  std::string metric;
  std::vector<double> values;  // aligned with TableOptions::cases
  std::vector<std::vector<ReplicationRecord>> records;  // per case, if kept
};

[[nodiscard]] std::vector<TableRow> run_table(const TableOptions& options);
void write_table_csv(std::ostream& out, const TableOptions& options,
                     const std::vector<TableRow>& rows);

/// Scenario definitions behind each table.
[[nodiscard]] std::vector<std::pair<std::string, ScenarioSpec>> table_scenarios(int table_id);

// ---------------------------------------------------------------------------
// Distributional checks and illustration data

/// sup |F_n(z) - Phi(z)| of a sample against the standard normal.
[[nodiscard]] double ks_statistic_normal(std::span<const double> sample);
/// Asymptotic Kolmogorov p-value of statistic d at sample size n.
[[nodiscard]] double ks_pvalue(double d, std::size_t n);

/// Likert stress series (1..5) and a sensing series reproducing the two
/// worked examples: scenario 1 has one mean shift in stress at 50 and a
/// mean+variance shift in the sensing variable at 55; scenario 2 has stress
/// variance shifts at 40 and 60 and sensing shifts at 45 and 65.
struct Illustration {
  DiscreteSeries stress;
  ContinuousSeries sensing;
  std::vector<long> stress_points;
  std::vector<long> sensing_points;
};
[[nodiscard]] Illustration illustration_data(int scenario, std::uint64_t seed);

}  // namespace hotspot::sim
