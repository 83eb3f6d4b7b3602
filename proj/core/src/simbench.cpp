#include "hotspot/simbench.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>

#include <boost/math/distributions/normal.hpp>

#include "hotspot/detail/parallel.hpp"
#include "hotspot/detectors.hpp"
#include "hotspot/rng.hpp"
#include "hotspot/segmentation.hpp"

namespace hotspot::sim {

namespace {
constexpr std::uint64_t kStreamY = 1;
constexpr std::uint64_t kStreamX = 2;
constexpr std::uint64_t kStreamBootstrap = 3;
}  // namespace

CaseParams case_params(int case_id) {
  switch (case_id) {
    case 1: return {2.0, 0.1, 0.4};
    case 2: return {2.0, 0.1, 0.8};
    case 3: return {2.0, 0.4, 0.8};
    case 4: return {1.0, 0.1, 0.4};
    case 5: return {1.0, 0.1, 0.8};
    case 6: return {1.0, 0.4, 0.8};
    default: throw InvalidArgument("case id must be 1..6, got " + std::to_string(case_id));
  }
}

std::vector<long> ScenarioSpec::shifted_y_points() const {
  std::vector<long> out = y_points;
  for (auto& k : out) k += delta;
  return out;
}

namespace {
void check_points(const std::vector<long>& points, std::size_t n, const char* which) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] < 1 || points[i] >= static_cast<long>(n)) {
      throw InvalidArgument(std::string(which) + " change point " + std::to_string(points[i]) +
                            " outside 1..n-1");
    }
    if (i > 0 && points[i] <= points[i - 1]) {
      throw InvalidArgument(std::string(which) + " change points must be strictly increasing");
    }
  }
}
}  // namespace

void ScenarioSpec::validate() const {
  if (n < 2) throw InvalidArgument("scenario length must be at least 2");
  (void)case_params(case_id);
  check_points(shifted_y_points(), n, "Y");
  if (x_points) check_points(*x_points, n, "X");
  if (replications < 1) throw InvalidArgument("scenario needs at least one replication");
}

std::string_view to_string(SegmentDesign design) noexcept {
  return design == SegmentDesign::Alternating ? "alternating" : "uniform";
}

SegmentDesign parse_design(std::string_view name) {
  if (name == "alternating") return SegmentDesign::Alternating;
  if (name == "uniform") return SegmentDesign::Uniform;
  throw InvalidArgument("unknown segment design '" + std::string(name) + "'");
}

ContinuousSeries piecewise_gaussian(std::size_t n, const std::vector<long>& points,
                                    const CaseParams& params, std::uint64_t seed,
                                    SegmentDesign design) {
  check_points(points, n, "series");
  Rng rng(seed);
  std::vector<double> means(points.size() + 1);
  std::vector<double> sds(points.size() + 1);
  for (std::size_t s = 0; s < means.size(); ++s) {
    if (design == SegmentDesign::Alternating) {
      means[s] = s % 2 == 1 ? params.mu : -params.mu;
      sds[s] = s % 2 == 1 ? params.sigma_max : params.sigma_min;
    } else {
      means[s] = -params.mu + 2.0 * params.mu * rng.uniform();
      sds[s] = params.sigma_min + (params.sigma_max - params.sigma_min) * rng.uniform();
    }
  }
  std::vector<double> values(n);
  std::size_t segment = 0;
  for (std::size_t t = 1; t <= n; ++t) {
    while (segment < points.size() && static_cast<long>(t) > points[segment]) ++segment;
    values[t - 1] = rng.normal(means[segment], sds[segment]);
  }
  return ContinuousSeries(std::move(values));
}

std::uint64_t replication_seed(const ScenarioSpec& spec, std::size_t index, std::uint64_t stream) {
  return derive_seed(spec.seed, stream, index);
}

SimulatedData generate(const ScenarioSpec& spec, std::size_t index) {
  spec.validate();
  const auto params = spec.params();
  SimulatedData out{piecewise_gaussian(spec.n, spec.shifted_y_points(), params,
                                       replication_seed(spec, index, kStreamY), spec.design),
                    std::nullopt};
  if (spec.x_points) {
    out.x = piecewise_gaussian(spec.n, *spec.x_points, params,
                               replication_seed(spec, index, kStreamX), spec.design);
  }
  return out;
}

// ---------------------------------------------------------------------------

PowerFdr power_fdr(const std::vector<std::vector<long>>& estimates,
                   const std::vector<long>& truth, long eta_power, long eta_fdr) {
  PowerFdr out;
  if (estimates.empty()) return out;
  std::size_t powered = 0;
  std::size_t detected = 0;
  std::size_t false_only = 0;
  for (const auto& est : estimates) {
    const bool all_found = std::all_of(truth.begin(), truth.end(), [&](long t) {
      return std::any_of(est.begin(), est.end(),
                         [&](long e) { return std::abs(e - t) <= eta_power; });
    });
    if (all_found) ++powered;
    if (est.empty()) continue;
    ++detected;
    const bool all_far = std::all_of(est.begin(), est.end(), [&](long e) {
      return std::all_of(truth.begin(), truth.end(),
                         [&](long t) { return std::abs(e - t) > eta_fdr; });
    });
    if (all_far) ++false_only;
  }
  out.power = static_cast<double>(powered) / static_cast<double>(estimates.size());
  out.fdr = detected == 0 ? 0.0 : static_cast<double>(false_only) / static_cast<double>(detected);
  return out;
}

std::pair<double, std::optional<long>> hit_and_length(const std::vector<Interval>& hotspots,
                                                      const std::vector<long>& truth, long n) {
  if (truth.empty()) return {0.0, std::nullopt};
  std::vector<Interval> containing;
  std::size_t hits = 0;
  for (long t : truth) {
    const auto it = std::find_if(hotspots.begin(), hotspots.end(),
                                 [t](const Interval& iv) { return iv.contains(t); });
    if (it == hotspots.end()) continue;
    ++hits;
    if (std::find(containing.begin(), containing.end(), *it) == containing.end()) {
      containing.push_back(*it);
    }
  }
  const double score = static_cast<double>(hits) / static_cast<double>(truth.size());
  if (hotspots.empty()) return {score, std::nullopt};
  if (hits < truth.size()) return {score, n};
  long length = 0;
  for (const auto& iv : containing) length += iv.length();
  return {score, std::min(length, n)};
}

HitLength hit_rate_and_length(const std::vector<std::vector<Interval>>& hotspots,
                              const std::vector<long>& truth, long n) {
  HitLength out;
  if (hotspots.empty()) return out;
  double score_sum = 0.0;
  double length_sum = 0.0;
  for (const auto& h : hotspots) {
    const auto [score, length] = hit_and_length(h, truth, n);
    score_sum += score;
    if (length) {
      length_sum += static_cast<double>(*length);
      ++out.length_count;
    }
  }
  out.hit_rate = score_sum / static_cast<double>(hotspots.size());
  out.mean_length = out.length_count == 0 ? 0.0 : length_sum / static_cast<double>(out.length_count);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

WindowConfig window_config(const PipelineConfig& cfg, std::size_t n) {
  WindowConfig w;
  w.bandwidth = cfg.bandwidth;
  w.n = n;
  w.eta = cfg.eta;
  w.alpha = cfg.alpha;
  return w;
}

}  // namespace

std::vector<long> joint_mosum_points(const ContinuousSeries& y, const PipelineConfig& cfg) {
  const auto trace = joint_univariate(y, window_config(cfg, y.size()), DetectorKind::UniY);
  return extract_changepoints(trace, cfg.threshold).points;
}

std::vector<long> bi_mosum_ensemble_points(const ContinuousSeries& y, const ContinuousSeries& x,
                                           const PipelineConfig& cfg) {
  const auto wcfg = window_config(cfg, y.size());
  const auto traces = detector_traces(y, &x, kCrossKinds, wcfg);
  std::vector<std::pair<double, long>> pooled;
  for (const auto& [kind, trace] : traces) {
    const auto cps = extract_changepoints(trace, cfg.threshold);
    for (std::size_t j = 0; j < cps.points.size(); ++j) pooled.emplace_back(cps.peaks[j], cps.points[j]);
  }
  std::sort(pooled.begin(), pooled.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const auto radius = static_cast<long>(wcfg.screening_radius());
  std::vector<long> kept;
  for (const auto& [peak, k] : pooled) {
    const bool near = std::any_of(kept.begin(), kept.end(),
                                  [&](long other) { return std::abs(other - k) <= radius; });
    if (!near) kept.push_back(k);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

Detector joint_mosum_detector(PipelineConfig cfg) {
  return [cfg](const ContinuousSeries& y, const ContinuousSeries*) {
    return joint_mosum_points(y, cfg);
  };
}

Detector bi_mosum_detector(PipelineConfig cfg) {
  return [cfg](const ContinuousSeries& y, const ContinuousSeries* x) {
    if (x == nullptr) throw InvalidArgument("Bi-MOSUM needs a second series");
    return bi_mosum_ensemble_points(y, *x, cfg);
  };
}

MetricReport evaluate_detector(const ScenarioSpec& spec, const Detector& detector, long eta_power,
                               long eta_fdr) {
  spec.validate();
  std::vector<long> truth = spec.shifted_y_points();
  if (spec.x_points) truth.insert(truth.end(), spec.x_points->begin(), spec.x_points->end());
  std::sort(truth.begin(), truth.end());

  MetricReport report;
  report.eta_power = eta_power;
  report.eta_fdr = eta_fdr;
  report.replications.resize(spec.replications);
  detail::parallel_for(spec.replications, [&](std::size_t r) {
    const auto data = generate(spec, r);
    auto& rec = report.replications[r];
    rec.index = r;
    rec.estimates = detector(data.y, data.x ? &*data.x : nullptr);
  });

  std::vector<std::vector<long>> estimates;
  estimates.reserve(report.replications.size());
  for (const auto& rec : report.replications) estimates.push_back(rec.estimates);
  const auto pf = power_fdr(estimates, truth, eta_power, eta_fdr);
  report.power = pf.power;
  report.fdr = pf.fdr;
  for (std::size_t r = 0; r < estimates.size(); ++r) {
    report.replications[r].score = power_fdr({estimates[r]}, truth, eta_power, eta_fdr).power;
  }
  return report;
}

HotspotSet hotspot_pipeline(const ContinuousSeries& y, const ContinuousSeries& x,
                            const PipelineConfig& cfg, HotspotMode mode,
                            std::uint64_t bootstrap_seed) {
  const auto wcfg = window_config(cfg, y.size());
  CombinationSpec spec;
  spec.mode = mode;
  const auto traces = detector_traces(y, &x, std::vector<DetectorKind>{DetectorKind::UniY,
                                                                       DetectorKind::YX,
                                                                       DetectorKind::YX2,
                                                                       DetectorKind::Y2X,
                                                                       DetectorKind::Y2X2},
                                      wcfg);
  if (mode == HotspotMode::Threshold) return hotspots_threshold(traces, cfg.threshold, spec);

  std::map<DetectorKind, ChangePointSet> sets;
  for (const auto& [kind, trace] : traces) sets[kind] = extract_changepoints(trace, cfg.threshold);

  // Without anchor points, or without any cross points, the intersection is
  // empty whatever the intervals; skip the bootstrap.
  const bool any_cross = std::any_of(kCrossKinds.begin(), kCrossKinds.end(),
                                     [&](DetectorKind k) { return !sets[k].points.empty(); });
  const bool skip = sets[DetectorKind::UniY].points.empty() || !any_cross;
  std::uint64_t stream = 0;
  for (auto& [kind, cps] : sets) {
    ++stream;
    if (skip || cps.points.empty()) {
      cps.cis.emplace();
      cps.margins.emplace();
      cps.ci_alpha = cfg.alpha;
      continue;
    }
    BootstrapSettings bs;
    bs.replications = cfg.bootstrap_replications;
    bs.seed = derive_seed(bootstrap_seed, stream, 0);
    bs.alpha = cfg.alpha;
    attach_cis(cps, y, &x, wcfg, bs);
  }
  return hotspots_ci(sets, spec, static_cast<long>(y.size()));
}

MetricReport evaluate_hotspots(const ScenarioSpec& spec, const PipelineConfig& cfg,
                               HotspotMode mode) {
  spec.validate();
  if (!spec.x_points) throw InvalidArgument("hotspot evaluation needs a bivariate scenario");
  const auto truth = spec.shifted_y_points();

  MetricReport report;
  report.replications.resize(spec.replications);
  detail::parallel_for(spec.replications, [&](std::size_t r) {
    const auto data = generate(spec, r);
    const auto hs = hotspot_pipeline(data.y, *data.x, cfg, mode,
                                     replication_seed(spec, r, kStreamBootstrap));
    auto& rec = report.replications[r];
    rec.index = r;
    rec.hotspots = hs.intervals;
    rec.score = hit_and_length(hs.intervals, truth, static_cast<long>(spec.n)).first;
  });

  std::vector<std::vector<Interval>> all;
  all.reserve(report.replications.size());
  for (const auto& rec : report.replications) all.push_back(rec.hotspots);
  const auto hl = hit_rate_and_length(all, truth, static_cast<long>(spec.n));
  report.hit_rate = hl.hit_rate;
  report.mean_interval_length = hl.mean_length;
  return report;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, ScenarioSpec>> table_scenarios(int table_id) {
  std::vector<std::pair<std::string, ScenarioSpec>> out;
  const auto uni = [](std::vector<long> y) {
    ScenarioSpec s;
    s.y_points = std::move(y);
    return s;
  };
  const auto bi = [](std::vector<long> y, std::vector<long> x, long delta) {
    ScenarioSpec s;
    s.y_points = std::move(y);
    s.x_points = std::move(x);
    s.delta = delta;
    return s;
  };
  switch (table_id) {
    case 1:
      out.emplace_back("jumps=1", uni({50}));
      out.emplace_back("jumps=2", uni({40, 60}));
      out.emplace_back("jumps=3", uni({25, 50, 75}));
      break;
    case 2:
      out.emplace_back("jumps=(1,1)", bi({40}, {60}, 0));
      out.emplace_back("jumps=(1,2)", bi({50}, {40, 60}, 0));
      out.emplace_back("jumps=(2,2)", bi({40, 60}, {30, 70}, 0));
      break;
    case 3:
      out.emplace_back("jumps=1;delta=0", bi({50}, {50}, 0));
      out.emplace_back("jumps=1;delta=5", bi({50}, {50}, 5));
      out.emplace_back("jumps=2;delta=0", bi({40, 60}, {40, 60}, 0));
      out.emplace_back("jumps=2;delta=5", bi({40, 60}, {40, 60}, 5));
      break;
    default: throw InvalidArgument("table id must be 1, 2 or 3");
  }
  return out;
}

std::vector<TableRow> run_table(const TableOptions& options) {
  if (options.threshold <= 0.0) throw InvalidArgument("run_table needs a positive threshold");
  auto scenarios = table_scenarios(options.table_id);
  std::vector<TableRow> rows;
  for (auto& [name, base] : scenarios) {
    for (auto g : options.bandwidths) {
      PipelineConfig pcfg;
      pcfg.bandwidth = g;
      pcfg.eta = options.eta;
      pcfg.alpha = options.alpha;
      pcfg.threshold = effective_threshold(options.threshold, g, options.scale);
      pcfg.bootstrap_replications = options.bootstrap_replications;

      if (options.table_id == 3) {
        for (auto mode : {HotspotMode::Threshold, HotspotMode::ConfidenceInterval}) {
          const std::string method = mode == HotspotMode::Threshold ? "Thrs" : "CI";
          TableRow hit{name, method, g, "hit_rate", {}};
          TableRow len{name, method, g, "length", {}};
          for (int c : options.cases) {
            auto spec = base;
            spec.n = options.n;
            spec.case_id = c;
            spec.design = options.design;
            spec.replications = options.replications;
            spec.seed = derive_seed(options.seed, static_cast<std::uint64_t>(c), 0);
            const auto report = evaluate_hotspots(spec, pcfg, mode);
            hit.values.push_back(report.hit_rate);
            len.values.push_back(report.mean_interval_length);
            if (options.keep_records) hit.records.push_back(report.replications);
          }
          rows.push_back(std::move(hit));
          rows.push_back(std::move(len));
        }
        continue;
      }

      const bool bivariate = options.table_id == 2;
      const long eta_fdr = bivariate ? 0 : 5;
      const auto detector = bivariate ? bi_mosum_detector(pcfg) : joint_mosum_detector(pcfg);
      const std::string method = bivariate ? "Bi-MOSUM" : "Joint-MOSUM";
      TableRow pow{name, method, g, "power(5)", {}};
      TableRow fdr{name, method, g, bivariate ? "fdr(0)" : "fdr(5)", {}};
      for (int c : options.cases) {
        auto spec = base;
        spec.n = options.n;
        spec.case_id = c;
        spec.design = options.design;
        spec.replications = options.replications;
        spec.seed = derive_seed(options.seed, static_cast<std::uint64_t>(c), 0);
        const auto report = evaluate_detector(spec, detector, 5, eta_fdr);
        pow.values.push_back(report.power);
        fdr.values.push_back(report.fdr);
        if (options.keep_records) pow.records.push_back(report.replications);
      }
      rows.push_back(std::move(pow));
      rows.push_back(std::move(fdr));
    }
  }
  return rows;
}

void write_table_csv(std::ostream& out, const TableOptions& options,
                     const std::vector<TableRow>& rows) {
  out << "table,scenario,method,G,metric";
  for (int c : options.cases) out << ",case" << c;
  out << '\n';
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(3);
  for (const auto& row : rows) {
    out << options.table_id << ',' << row.scenario << ',' << row.method << ',' << row.bandwidth
        << ',' << row.metric;
    for (double v : row.values) out << ',' << v;
    out << '\n';
  }
  out.flags(flags);
}

// ---------------------------------------------------------------------------

double ks_statistic_normal(std::span<const double> sample) {
  if (sample.empty()) throw InvalidArgument("empty input");
  std::vector<double> z(sample.begin(), sample.end());
  std::sort(z.begin(), z.end());
  const boost::math::normal_distribution<double> standard;
  const auto n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = boost::math::cdf(standard, z[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {
int likert(double latent) {
  static constexpr double cuts[] = {-1.5, -0.5, 0.5, 1.5};
  int level = 1;
  for (double c : cuts) level += latent > c ? 1 : 0;
  return level;
}
}  // namespace

Illustration illustration_data(int scenario, std::uint64_t seed) {
  constexpr std::size_t n = 100;
  Rng rng(derive_seed(seed, 0x696c6c75ULL, static_cast<std::uint64_t>(scenario)));
  Illustration out;
  std::vector<int> stress(n);
  if (scenario == 1) {
    out.stress_points = {50};
    out.sensing_points = {55};
    for (std::size_t t = 1; t <= n; ++t) stress[t - 1] = likert(rng.normal(t <= 50 ? -1.0 : 1.0, 0.6));
  } else if (scenario == 2) {
    out.stress_points = {40, 60};
    out.sensing_points = {45, 65};
    for (std::size_t t = 1; t <= n; ++t) {
      const bool wide = t > 40 && t <= 60;
      stress[t - 1] = likert(rng.normal(0.0, wide ? 1.5 : 0.3));
    }
  } else {
    throw InvalidArgument("illustration scenario must be 1 or 2");
  }
  out.stress = DiscreteSeries(std::move(stress), 5);
  out.sensing = piecewise_gaussian(n, out.sensing_points, case_params(1), rng.index(0, ~0ULL >> 1));
  return out;
}

}  // namespace hotspot::sim
