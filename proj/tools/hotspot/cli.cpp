#include "cli.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hotspot/critical_values.hpp"
#include "hotspot/detectors.hpp"
#include "hotspot/hotspots.hpp"
#include "hotspot/local_stats.hpp"
#include "hotspot/report.hpp"
#include "hotspot/rng.hpp"
#include "hotspot/segmentation.hpp"
#include "hotspot/series.hpp"
#include "hotspot/simbench.hpp"

namespace hotspot::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";
constexpr std::uint64_t kBootstrapStream = 0x626f6f74ULL;

// Bad flag combinations found after parsing; reported with the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string stress_col = "stress";
  std::string sensing_col;
  bool discrete = false;
  int levels = 0;
  std::uint64_t transform_seed = 1;

  std::size_t bandwidth = 0;
  double alpha = 0.05;
  double eta = 0.2;
  std::size_t threshold_reps = 1000;
  std::size_t boot_reps = 1000;
  std::uint64_t seed = 1;
  std::vector<std::string> kinds;
  std::string anchor = "UniY";
  std::string mode = "threshold";
  std::string scale = "direct";
  std::optional<double> critical_value;
  bool with_ci = false;

  bool no_cache = false;
  bool rebuild_cache = false;
  std::string cache_dir;

  std::string out;
  std::string format = "json";

  int table = 1;
  std::size_t replications = 500;
  std::vector<std::size_t> bandwidths{20, 40};
  std::vector<int> cases{1, 2, 3, 4, 5, 6};
  std::string design = "alternating";
  std::size_t n = 100;
  std::string audit;
  std::vector<std::size_t> grid;

  int scenario = 1;
};

// ---------------------------------------------------------------------------
// plumbing

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  return f;
}

void write_json(const fs::path& path, const json& doc) {
  auto f = open_out(path);
  f << doc.dump(2) << '\n';
}

void config_line(std::ostream& os, const json& config) { os << "# config: " << config.dump() << '\n'; }

fs::path out_dir(const Options& o) {
  if (o.out.empty()) throw UsageError("--out is required");
  fs::path dir(o.out);
  fs::create_directories(dir);
  return dir;
}

fs::path cache_path(const Options& o) {
  return o.cache_dir.empty() ? ThresholdCache::default_path()
                             : fs::path(o.cache_dir) / "thresholds.json";
}

ThresholdRequest threshold_request(const Options& o, std::size_t n) {
  ThresholdRequest req;
  req.n = n;
  req.alpha = o.alpha;
  req.replications = o.threshold_reps;
  req.seed = o.seed;
  req.grid = o.grid;
  return req;
}

double critical_value(const Options& o, std::size_t n, std::ostream& err) {
  if (o.critical_value) {
    if (!(*o.critical_value > 0.0)) throw UsageError("--critical-value must be positive");
    return *o.critical_value;
  }
  const auto req = threshold_request(o, n);
  if (o.no_cache) return simulate_threshold(req);
  ThresholdCache cache(cache_path(o));
  const auto lookup = cache.get_or_compute(req, o.rebuild_cache);
  for (const auto& w : lookup.warnings) err << "warning: " << w << '\n';
  return lookup.value;
}

ThresholdScale scale_of(const Options& o) { return parse_threshold_scale(o.scale); }

json analysis_config(const Options& o, const std::string& command) {
  json c;
  c["command"] = command;
  c["version"] = kVersion;
  c["seed"] = o.seed;
  c["alpha"] = o.alpha;
  c["eta"] = o.eta;
  c["threshold_reps"] = o.threshold_reps;
  c["boot_reps"] = o.boot_reps;
  c["threshold_scale"] = o.scale;
  return c;
}

json input_config(const Options& o) {
  json c;
  c["input"] = o.input;
  c["stress_col"] = o.stress_col;
  c["sensing_col"] = o.sensing_col.empty() ? json(nullptr) : json(o.sensing_col);
  c["discrete"] = o.discrete;
  c["levels"] = o.levels;
  c["transform_seed"] = o.transform_seed;
  return c;
}

struct Inputs {
  ContinuousSeries y;
  std::optional<ContinuousSeries> x;
  std::optional<DiscreteSeries> codes;
  std::optional<TransformRecord> transform;
};

Inputs load_inputs(const Options& o, bool need_sensing) {
  if (o.input.empty()) throw UsageError("--input is required");
  if (need_sensing && o.sensing_col.empty()) {
    throw UsageError("--sensing-col is required for this command");
  }
  const auto table = read_csv_table(o.input);
  Inputs in;
  if (o.discrete) {
    auto codes = discrete_column(table, o.stress_col, o.levels);
    auto result = to_continuous(codes, o.transform_seed);
    in.y = std::move(result.series);
    in.transform = std::move(result.record);
    in.codes = std::move(codes);
  } else {
    in.y = continuous_column(table, o.stress_col);
  }
  if (!o.sensing_col.empty()) in.x = continuous_column(table, o.sensing_col);
  return in;
}

WindowConfig window_config(const Options& o, std::size_t n) {
  WindowConfig cfg;
  cfg.bandwidth = o.bandwidth;
  cfg.n = n;
  cfg.eta = o.eta;
  cfg.alpha = o.alpha;
  cfg.validate();
  return cfg;
}

BootstrapSettings bootstrap_settings(const Options& o, DetectorKind kind) {
  BootstrapSettings bs;
  bs.replications = o.boot_reps;
  bs.alpha = o.alpha;
  bs.seed = derive_seed(o.seed, kBootstrapStream, static_cast<std::uint64_t>(kind));
  return bs;
}

std::vector<DetectorKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<DetectorKind> kinds;
  for (const auto& name : names) {
    DetectorKind kind{};
    try {
      kind = parse_kind(name);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) kinds.push_back(kind);
  }
  return kinds;
}

std::string join_points(const std::vector<long>& points) {
  if (points.empty()) return "-";
  std::ostringstream os;
  for (std::size_t i = 0; i < points.size(); ++i) os << (i ? "," : "") << points[i];
  return os.str();
}

std::string join_intervals(const std::vector<Interval>& intervals) {
  if (intervals.empty()) return "-";
  std::ostringstream os;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    os << (i ? "," : "") << '[' << intervals[i].lo << ',' << intervals[i].hi << ']';
  }
  return os.str();
}

void write_traces(const fs::path& dir, const json& config,
                  const std::map<DetectorKind, DetectorTrace>& traces) {
  for (const auto& [kind, trace] : traces) {
    auto f = open_out(dir / ("trace_" + std::string(to_string(kind)) + ".csv"));
    config_line(f, config);
    write_trace_csv(f, trace);
  }
}

void write_changepoints_csv(std::ostream& os, const std::vector<ChangePointSet>& sets) {
  os << "kind,k,d2,ci_lo,ci_hi,margin\n";
  for (const auto& cps : sets) {
    for (std::size_t j = 0; j < cps.points.size(); ++j) {
      os << to_string(cps.kind) << ',' << cps.points[j] << ',' << format_double(cps.peaks[j]);
      if (cps.cis) {
        os << ',' << (*cps.cis)[j].lo << ',' << (*cps.cis)[j].hi << ',' << (*cps.margins)[j];
      } else {
        os << ",,,";
      }
      os << '\n';
    }
  }
}

void write_hotspots_csv(std::ostream& os, const HotspotSet& set) {
  os << "lo,hi,length,kinds\n";
  for (std::size_t i = 0; i < set.intervals.size(); ++i) {
    os << set.intervals[i].lo << ',' << set.intervals[i].hi << ',' << set.intervals[i].length()
       << ',';
    const auto& from = set.provenance[i];
    for (std::size_t j = 0; j < from.size(); ++j) os << (j ? ";" : "") << to_string(from[j]);
    os << '\n';
  }
}

void write_transform(const fs::path& dir, const json& config, const std::string& format,
                     const DiscreteSeries& codes, const TransformRecord& record) {
  if (format == "csv") {
    auto f = open_out(dir / "transform.csv");
    config_line(f, config);
    write_transform_csv(f, codes, record);
  } else {
    json doc;
    doc["config"] = config;
    doc["transform"] = to_json(record);
    write_json(dir / "transform.json", doc);
  }
}

void write_moments(const fs::path& dir, const json& config, const std::string& name,
                   const ContinuousSeries& series, const WindowConfig& cfg) {
  auto f = open_out(dir / ("moments_" + name + ".csv"));
  config_line(f, config);
  write_moments_csv(f, local_moments(series, cfg));
}

// ---------------------------------------------------------------------------
// commands

int cmd_detect(const Options& o, std::ostream& out, std::ostream& err) {
  const auto in = load_inputs(o, false);
  const auto cfg = window_config(o, in.y.size());
  auto kinds = parse_kinds(o.kinds);
  if (kinds.empty()) {
    kinds = in.x ? std::vector<DetectorKind>(kAllKinds.begin(), kAllKinds.end())
                 : std::vector<DetectorKind>{DetectorKind::UniY};
  }
  for (auto kind : kinds) {
    if (kind != DetectorKind::UniY && !in.x) {
      throw UsageError(std::string(to_string(kind)) + " needs --sensing-col");
    }
  }
  const double dn = critical_value(o, cfg.n, err);
  const double thr = effective_threshold(dn, cfg.bandwidth, scale_of(o));

  json config = analysis_config(o, "detect");
  config.update(input_config(o));
  config["bandwidth"] = cfg.bandwidth;
  config["n"] = cfg.n;
  std::vector<std::string> names;
  for (auto kind : kinds) names.emplace_back(to_string(kind));
  config["kinds"] = names;
  config["ci"] = o.with_ci;
  config["critical_value"] = dn;
  config["threshold"] = thr;
  config["format"] = o.format;

  const auto dir = out_dir(o);
  const ContinuousSeries* x = in.x ? &*in.x : nullptr;
  const auto traces = detector_traces(in.y, x, kinds, cfg);
  write_traces(dir, config, traces);
  write_moments(dir, config, "stress", in.y, cfg);
  if (in.x) write_moments(dir, config, "sensing", *in.x, cfg);
  if (in.transform) write_transform(dir, config, o.format, *in.codes, *in.transform);

  std::vector<ChangePointSet> sets;
  for (auto kind : kinds) {
    auto cps = extract_changepoints(traces.at(kind), thr);
    if (o.with_ci && !cps.points.empty()) attach_cis(cps, in.y, x, cfg, bootstrap_settings(o, kind));
    sets.push_back(std::move(cps));
  }

  if (o.format == "csv") {
    auto f = open_out(dir / "changepoints.csv");
    config_line(f, config);
    write_changepoints_csv(f, sets);
  } else {
    json doc;
    doc["config"] = config;
    doc["changepoints"] = json::array();
    for (const auto& cps : sets) doc["changepoints"].push_back(to_json(cps));
    write_json(dir / "changepoints.json", doc);
  }

  for (const auto& cps : sets) out << to_string(cps.kind) << '\t' << join_points(cps.points) << '\n';
  return kExitOk;
}

int cmd_hotspot(const Options& o, std::ostream& out, std::ostream& err) {
  const auto in = load_inputs(o, true);
  const auto cfg = window_config(o, in.y.size());

  CombinationSpec spec;
  if (!o.kinds.empty()) spec.cross_kinds = parse_kinds(o.kinds);
  spec.anchor = parse_kinds({o.anchor}).front();
  spec.mode = o.mode == "ci" ? HotspotMode::ConfidenceInterval : HotspotMode::Threshold;
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }

  const double dn = critical_value(o, cfg.n, err);
  const double thr = effective_threshold(dn, cfg.bandwidth, scale_of(o));

  json config = analysis_config(o, "hotspot");
  config.update(input_config(o));
  config["bandwidth"] = cfg.bandwidth;
  config["n"] = cfg.n;
  config["mode"] = o.mode;
  config["anchor"] = std::string(to_string(spec.anchor));
  std::vector<std::string> cross;
  for (auto kind : spec.cross_kinds) cross.emplace_back(to_string(kind));
  config["cross_kinds"] = cross;
  config["critical_value"] = dn;
  config["threshold"] = thr;
  config["format"] = o.format;

  std::vector<DetectorKind> kinds{spec.anchor};
  kinds.insert(kinds.end(), spec.cross_kinds.begin(), spec.cross_kinds.end());
  const ContinuousSeries* x = &*in.x;
  const auto traces = detector_traces(in.y, x, kinds, cfg);

  std::map<DetectorKind, ChangePointSet> sets;
  for (auto kind : kinds) {
    auto cps = extract_changepoints(traces.at(kind), thr);
    if (spec.mode == HotspotMode::ConfidenceInterval) {
      if (cps.points.empty()) {
        cps.cis.emplace();
        cps.margins.emplace();
        cps.ci_alpha = o.alpha;
      } else {
        attach_cis(cps, in.y, x, cfg, bootstrap_settings(o, kind));
      }
    }
    sets.emplace(kind, std::move(cps));
  }
  const auto hs = spec.mode == HotspotMode::Threshold
                      ? hotspots_threshold(traces, thr, spec)
                      : hotspots_ci(sets, spec, static_cast<long>(cfg.n));

  const auto dir = out_dir(o);
  write_traces(dir, config, traces);
  if (in.transform) write_transform(dir, config, o.format, *in.codes, *in.transform);
  {
    auto f = open_out(dir / "shading.csv");
    config_line(f, config);
    write_shading_csv(f, hs, static_cast<long>(cfg.n));
  }
  if (o.format == "csv") {
    auto f = open_out(dir / "hotspots.csv");
    config_line(f, config);
    write_hotspots_csv(f, hs);
  } else {
    json doc;
    doc["config"] = config;
    doc["hotspots"] = to_json(hs);
    doc["changepoints"] = json::array();
    for (auto kind : kinds) doc["changepoints"].push_back(to_json(sets.at(kind)));
    write_json(dir / "hotspots.json", doc);
  }

  out << "G";
  for (auto kind : kinds) out << '\t' << to_string(kind);
  out << '\t' << (spec.mode == HotspotMode::Threshold ? "Thrs" : "CI") << '\n';
  out << cfg.bandwidth;
  for (auto kind : kinds) out << '\t' << join_points(sets.at(kind).points);
  out << '\t' << join_intervals(hs.intervals) << '\n';
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  sim::TableOptions to;
  to.table_id = o.table;
  to.replications = o.replications;
  to.seed = o.seed;
  to.bandwidths = o.bandwidths;
  to.cases = o.cases;
  to.n = o.n;
  to.alpha = o.alpha;
  to.eta = o.eta;
  to.bootstrap_replications = o.boot_reps;
  to.design = sim::parse_design(o.design);
  to.scale = scale_of(o);
  to.keep_records = !o.audit.empty();
  for (auto g : to.bandwidths) {
    WindowConfig cfg;
    cfg.bandwidth = g;
    cfg.n = to.n;
    cfg.eta = to.eta;
    cfg.alpha = to.alpha;
    cfg.validate();
  }
  to.threshold = critical_value(o, to.n, err);

  json config = analysis_config(o, "simulate");
  config["table"] = to.table_id;
  config["replications"] = to.replications;
  config["bandwidths"] = to.bandwidths;
  config["cases"] = to.cases;
  config["n"] = to.n;
  config["design"] = o.design;
  config["critical_value"] = to.threshold;

  const auto start = std::chrono::steady_clock::now();
  const auto rows = sim::run_table(to);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  if (o.out.empty()) {
    config_line(out, config);
    sim::write_table_csv(out, to, rows);
  } else {
    auto f = open_out(o.out);
    config_line(f, config);
    sim::write_table_csv(f, to, rows);
  }
  if (!o.audit.empty()) {
    json doc;
    doc["config"] = config;
    doc["cells"] = json::array();
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.records.size(); ++c) {
        json cell;
        cell["scenario"] = row.scenario;
        cell["method"] = row.method;
        cell["G"] = row.bandwidth;
        cell["case"] = to.cases[c];
        cell["replications"] = json::array();
        for (const auto& rec : row.records[c]) {
          json r;
          r["index"] = rec.index;
          r["score"] = rec.score;
          if (to.table_id == 3) {
            r["hotspots"] = json::array();
            for (const auto& iv : rec.hotspots) r["hotspots"].push_back(to_json(iv));
          } else {
            r["estimates"] = rec.estimates;
          }
          cell["replications"].push_back(std::move(r));
        }
        doc["cells"].push_back(std::move(cell));
      }
    }
    write_json(o.audit, doc);
  }
  err << "simulate: table " << to.table_id << ", " << rows.size() << " rows x " << to.cases.size()
      << " cases, R=" << to.replications << ", " << std::fixed << std::setprecision(1)
      << elapsed.count() << " s\n";
  return kExitOk;
}

int cmd_threshold(const Options& o, std::ostream& out, std::ostream& err) {
  const auto req = threshold_request(o, o.n);
  double value = 0.0;
  if (o.no_cache) {
    value = simulate_threshold(req);
    err << "threshold: computed (cache bypassed)\n";
  } else {
    ThresholdCache cache(cache_path(o));
    const auto lookup = cache.get_or_compute(req, o.rebuild_cache);
    for (const auto& w : lookup.warnings) err << "warning: " << w << '\n';
    err << "threshold: " << (lookup.hit ? "cache hit" : "computed and cached") << " ("
        << cache.path().string() << ")\n";
    value = lookup.value;
  }

  json config;
  config["command"] = "threshold";
  config["version"] = kVersion;
  config["n"] = req.n;
  config["alpha"] = req.alpha;
  config["threshold_reps"] = req.replications;
  config["seed"] = req.seed;
  config["grid"] = req.resolved_grid();

  std::ostringstream body;
  if (o.format == "csv") {
    config_line(body, config);
    body << "n,alpha,replications,seed,critical_value\n"
         << req.n << ',' << format_double(req.alpha) << ',' << req.replications << ',' << req.seed
         << ',' << format_double(value) << '\n';
  } else {
    json doc;
    doc["config"] = config;
    doc["fingerprint"] = req.fingerprint();
    doc["critical_value"] = value;
    body << doc.dump(2) << '\n';
  }
  if (o.out.empty()) {
    out << body.str();
  } else {
    auto f = open_out(o.out);
    f << body.str();
  }
  return kExitOk;
}

int cmd_illustrate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto ill = sim::illustration_data(o.scenario, o.seed);
  const auto transformed = to_continuous(ill.stress, o.transform_seed);
  const auto& y = transformed.series;
  const auto& x = ill.sensing;

  Options local = o;
  if (local.bandwidth == 0) local.bandwidth = 20;
  const auto cfg = window_config(local, y.size());
  const double dn = critical_value(local, cfg.n, err);
  const double thr = effective_threshold(dn, cfg.bandwidth, scale_of(local));

  json config = analysis_config(local, "illustrate");
  config["scenario"] = local.scenario;
  config["transform_seed"] = local.transform_seed;
  config["bandwidth"] = cfg.bandwidth;
  config["n"] = cfg.n;
  config["critical_value"] = dn;
  config["threshold"] = thr;

  const std::vector<DetectorKind> kinds(kAllKinds.begin(), kAllKinds.end());
  const auto traces = detector_traces(y, &x, kinds, cfg);
  std::map<DetectorKind, ChangePointSet> sets;
  for (auto kind : kinds) {
    auto cps = extract_changepoints(traces.at(kind), thr);
    if (cps.points.empty()) {
      cps.cis.emplace();
      cps.margins.emplace();
      cps.ci_alpha = local.alpha;
    } else {
      attach_cis(cps, y, &x, cfg, bootstrap_settings(local, kind));
    }
    sets.emplace(kind, std::move(cps));
  }
  CombinationSpec spec;
  const auto by_threshold = hotspots_threshold(traces, thr, spec);
  spec.mode = HotspotMode::ConfidenceInterval;
  const auto by_ci = hotspots_ci(sets, spec, static_cast<long>(cfg.n));

  const auto dir = out_dir(local);
  {
    auto f = open_out(dir / "data.csv");
    config_line(f, config);
    f << "t,stress,stress_latent,sensing\n";
    for (std::size_t t = 0; t < y.size(); ++t) {
      f << t + 1 << ',' << ill.stress.values()[t] << ',' << format_double(y.values()[t]) << ','
        << format_double(x.values()[t]) << '\n';
    }
  }
  write_traces(dir, config, traces);
  {
    auto f = open_out(dir / "shading.csv");
    config_line(f, config);
    f << "k,threshold,ci\n";
    for (long k = 1; k <= static_cast<long>(cfg.n); ++k) {
      f << k << ',' << (by_threshold.covers(k) ? 1 : 0) << ',' << (by_ci.covers(k) ? 1 : 0)
        << '\n';
    }
  }
  json doc;
  doc["config"] = config;
  doc["truth"] = {{"stress", ill.stress_points}, {"sensing", ill.sensing_points}};
  doc["transform"] = to_json(transformed.record);
  doc["threshold_rule"] = to_json(by_threshold);
  doc["ci_rule"] = to_json(by_ci);
  doc["changepoints"] = json::array();
  for (auto kind : kinds) doc["changepoints"].push_back(to_json(sets.at(kind)));
  write_json(dir / "illustration.json", doc);

  out << "truth\tstress " << join_points(ill.stress_points) << "\tsensing "
      << join_points(ill.sensing_points) << '\n';
  for (auto kind : kinds) {
    out << to_string(kind) << '\t' << join_points(sets.at(kind).points) << '\n';
  }
  out << "Thrs\t" << join_intervals(by_threshold.intervals) << '\n';
  out << "CI\t" << join_intervals(by_ci.intervals) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// option wiring

void add_inputs(CLI::App* sc, Options& o, bool input_required) {
  auto* in = sc->add_option("--input", o.input, "CSV file with a header row");
  if (input_required) in->required();
  in->check(CLI::ExistingFile);
  sc->add_option("--stress-col", o.stress_col, "Column holding the stress series")
      ->capture_default_str();
  sc->add_option("--sensing-col", o.sensing_col, "Column holding the passive sensing series");
  sc->add_flag("--discrete", o.discrete,
               "Stress column holds ordinal codes 1..L; transform it to a continuous series");
  sc->add_option("--levels", o.levels, "Number of ordinal levels (0 infers from the data)")
      ->check(CLI::NonNegativeNumber);
  sc->add_option("--transform-seed", o.transform_seed, "Seed of the discrete transform draws")
      ->capture_default_str();
}

void add_threshold_opts(CLI::App* sc, Options& o) {
  sc->add_option("--alpha", o.alpha, "Significance level")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  sc->add_option("--threshold-reps", o.threshold_reps, "Monte-Carlo replications for D_n")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{100}, std::size_t{10000000}));
  sc->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  sc->add_flag("--no-cache", o.no_cache, "Compute the critical value without the cache");
  sc->add_flag("--rebuild-cache", o.rebuild_cache, "Recompute and overwrite the cached value");
  sc->add_option("--cache-dir", o.cache_dir,
                 "Directory of thresholds.json (default $HOTSPOT_CACHE_DIR or .hotspot-cache)");
}

void add_analysis(CLI::App* sc, Options& o, bool bandwidth_required) {
  auto* g = sc->add_option("--bandwidth,-G", o.bandwidth, "Window size G")
                ->check(CLI::PositiveNumber);
  if (bandwidth_required) g->required();
  sc->add_option("--eta", o.eta, "Screening fraction")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  sc->add_option("--boot-reps", o.boot_reps, "Bootstrap replications for CIs")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{100}, std::size_t{10000000}));
  sc->add_option("--threshold-scale", o.scale, "Compare d2 with D_n (direct) or 2 D_n^2 / G (normalized)")
      ->capture_default_str()
      ->check(CLI::IsMember({"direct", "normalized"}));
  sc->add_option("--critical-value", o.critical_value, "Use this D_n instead of simulating it");
  add_threshold_opts(sc, o);
}

void add_output(CLI::App* sc, Options& o, bool dir_required) {
  auto* out = sc->add_option("--out", o.out, dir_required ? "Output directory" : "Output file");
  if (dir_required) out->required();
  sc->add_option("--format", o.format, "Report format")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MOSUM change-point and hotspot detection for paired time series", "hotspot"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto* detect = app.add_subcommand("detect", "Detector traces and change points");
  add_inputs(detect, o, true);
  add_analysis(detect, o, true);
  add_output(detect, o, true);
  detect->add_option("--kinds", o.kinds, "Detector kinds (UniY,UniX,YX,YX2,Y2X,Y2X2)")
      ->delimiter(',');
  detect->add_flag("--ci", o.with_ci, "Attach bootstrap confidence intervals");

  auto* hot = app.add_subcommand("hotspot", "Hotspot intervals of a stress/sensing pair");
  add_inputs(hot, o, true);
  add_analysis(hot, o, true);
  add_output(hot, o, true);
  hot->add_option("--mode", o.mode, "Hotspot rule")
      ->capture_default_str()
      ->check(CLI::IsMember({"threshold", "ci"}));
  hot->add_option("--kinds", o.kinds, "Cross kinds to combine (default: all four)")
      ->delimiter(',');
  hot->add_option("--anchor", o.anchor, "Univariate detector the cross kinds are intersected with")
      ->capture_default_str()
      ->check(CLI::IsMember({"UniY", "UniX"}));

  auto* simulate = app.add_subcommand("simulate", "Reproduce the simulation tables");
  simulate->add_option("--table", o.table, "Table id")->required()->check(CLI::IsMember({1, 2, 3}));
  simulate->add_option("--replications,-R", o.replications, "Replications per cell")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--bandwidths", o.bandwidths, "Window sizes")->delimiter(',')->capture_default_str();
  simulate->add_option("--cases", o.cases, "Cases")->delimiter(',')->check(CLI::Range(1, 6))->capture_default_str();
  simulate->add_option("--design", o.design, "Segment parameter design")
      ->capture_default_str()
      ->check(CLI::IsMember({"alternating", "uniform"}));
  simulate->add_option("--n", o.n, "Series length")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--eta", o.eta, "Screening fraction")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--boot-reps", o.boot_reps, "Bootstrap replications (table 3)")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{100}, std::size_t{10000000}));
  simulate->add_option("--threshold-scale", o.scale, "direct or normalized")
      ->capture_default_str()
      ->check(CLI::IsMember({"direct", "normalized"}));
  simulate->add_option("--critical-value", o.critical_value, "Use this D_n instead of simulating it");
  simulate->add_option("--out", o.out, "CSV output file (default: stdout)");
  simulate->add_option("--audit", o.audit, "JSON file for per-replication records");
  add_threshold_opts(simulate, o);

  auto* threshold = app.add_subcommand("threshold", "Monte-Carlo critical value D_n (cached)");
  threshold->add_option("--n", o.n, "Series length")->capture_default_str()->check(CLI::PositiveNumber);
  threshold->add_option("--grid", o.grid, "Bandwidth grid (default 25..min((n-1)/2,200))")
      ->delimiter(',');
  add_threshold_opts(threshold, o);
  add_output(threshold, o, false);

  auto* illustrate = app.add_subcommand("illustrate", "Synthetic worked examples with plot data");
  illustrate->add_option("--scenario", o.scenario, "1: mean shift, 2: variance shifts")
      ->capture_default_str()
      ->check(CLI::IsMember({1, 2}));
  illustrate->add_option("--transform-seed", o.transform_seed, "Seed of the discrete transform draws")
      ->capture_default_str();
  add_analysis(illustrate, o, false);
  illustrate->add_option("--out", o.out, "Output directory")->required();

  try {
    std::vector<const char*> argv{"hotspot"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*detect) return cmd_detect(o, out, err);
    if (*hot) return cmd_hotspot(o, out, err);
    if (*simulate) return cmd_simulate(o, out, err);
    if (*threshold) return cmd_threshold(o, out, err);
    if (*illustrate) return cmd_illustrate(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace hotspot::cli
