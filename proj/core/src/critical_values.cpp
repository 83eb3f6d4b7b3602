#include "hotspot/critical_values.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hotspot/detail/parallel.hpp"
#include "hotspot/rng.hpp"
#include "hotspot/series.hpp"
#include "hotspot/types.hpp"

namespace hotspot {

namespace {
constexpr std::uint64_t kWalkStream = 0x7468726573686f6cULL;

std::uint64_t fnv1a(const std::vector<std::size_t>& values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto v : values) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (static_cast<std::uint64_t>(v) >> (8 * byte)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}
}  // namespace

std::vector<std::size_t> auto_grid(std::size_t n) {
  const std::size_t upper = std::min<std::size_t>(n >= 1 ? (n - 1) / 2 : 0, 200);
  std::vector<std::size_t> grid;
  for (std::size_t g = 25; g <= upper; ++g) grid.push_back(g);
  return grid;
}

std::vector<std::size_t> ThresholdRequest::resolved_grid() const {
  auto g = grid.empty() ? auto_grid(n) : grid;
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  std::erase_if(g, [this](std::size_t v) { return v == 0 || 2 * v > n; });
  return g;
}

std::string ThresholdRequest::fingerprint() const {
  std::ostringstream os;
  os << "n=" << n << ";alpha=" << format_double(alpha) << ";B=" << replications
     << ";seed=" << seed << ";grid=" << std::hex << fnv1a(resolved_grid());
  return os.str();
}

std::vector<double> simulate_threshold_sample(const ThresholdRequest& req) {
  if (req.replications < 100) throw InvalidArgument("threshold needs at least 100 replications");
  const auto grid = req.resolved_grid();
  if (grid.empty()) {
    throw InvalidArgument("degenerate bandwidth grid for n=" + std::to_string(req.n) +
                          " (auto grid needs n >= 51)");
  }
  const std::size_t n = req.n;
  const std::size_t steps = n + grid.back();

  std::vector<double> maxima(req.replications);
  detail::parallel_for(req.replications, [&](std::size_t b) {
    Rng rng(derive_seed(req.seed, kWalkStream, b));
    std::vector<double> w1(steps + 1, 0.0);
    std::vector<double> w2(steps + 1, 0.0);
    for (std::size_t t = 1; t <= steps; ++t) w1[t] = w1[t - 1] + rng.normal();
    for (std::size_t t = 1; t <= steps; ++t) w2[t] = w2[t - 1] + rng.normal();

    double best = 0.0;
    for (auto g : grid) {
      const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(g));
      for (std::size_t h = g; h + g <= n; ++h) {
        const double a = (w1[h + g] - 2.0 * w1[h] + w1[h - g]) * scale;
        const double c = (w2[h + g] - 2.0 * w2[h] + w2[h - g]) * scale;
        best = std::max(best, std::sqrt(a * a + c * c));
      }
    }
    maxima[b] = best;
  });
  std::sort(maxima.begin(), maxima.end());
  return maxima;
}

double threshold_from_sample(const std::vector<double>& sorted_maxima, double alpha) {
  return sorted_maxima[upper_order_index(alpha, sorted_maxima.size()) - 1];
}

double simulate_threshold(const ThresholdRequest& req) {
  if (!(req.alpha > 0.0 && req.alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
  return threshold_from_sample(simulate_threshold_sample(req), req.alpha);
}

std::string_view to_string(ThresholdScale scale) noexcept {
  return scale == ThresholdScale::Direct ? "direct" : "normalized";
}

ThresholdScale parse_threshold_scale(std::string_view name) {
  if (name == "direct") return ThresholdScale::Direct;
  if (name == "normalized") return ThresholdScale::Normalized;
  throw InvalidArgument("unknown threshold scale '" + std::string(name) + "'");
}

double effective_threshold(double critical_value, std::size_t bandwidth, ThresholdScale scale) {
  if (bandwidth == 0) throw InvalidArgument("bandwidth must be positive");
  if (scale == ThresholdScale::Direct) return critical_value;
  return 2.0 * critical_value * critical_value / static_cast<double>(bandwidth);
}

// ---------------------------------------------------------------------------

ThresholdCache::ThresholdCache(std::filesystem::path file) : file_(std::move(file)) {}

std::filesystem::path ThresholdCache::default_path() {
  if (const char* dir = std::getenv("HOTSPOT_CACHE_DIR"); dir != nullptr && *dir != '\0') {
    return std::filesystem::path(dir) / "thresholds.json";
  }
  return std::filesystem::path(".hotspot-cache") / "thresholds.json";
}

ThresholdCache::Lookup ThresholdCache::get_or_compute(const ThresholdRequest& req, bool refresh) {
  std::lock_guard lock(mutex_);
  Lookup result;
  const auto key = req.fingerprint();

  nlohmann::json doc = nlohmann::json::object();
  if (std::filesystem::exists(file_)) {
    try {
      std::ifstream in(file_);
      doc = nlohmann::json::parse(in);
      if (!doc.is_object()) throw std::runtime_error("top level is not an object");
      const auto it = doc.find(key);
      if (!refresh && it != doc.end()) {
        const double value = it->at("value").get<double>();
        if (std::isfinite(value) && value > 0.0) {
          result.value = value;
          result.hit = true;
          return result;
        }
        result.warnings.push_back("invalid cached value for " + key + "; recomputing");
      }
    } catch (const std::exception& e) {
      result.warnings.push_back("threshold cache '" + file_.string() + "' is corrupt (" + e.what() +
                                "); rebuilding");
      doc = nlohmann::json::object();
    }
  }

  result.value = simulate_threshold(req);
  nlohmann::json entry;
  entry["value"] = result.value;
  entry["n"] = req.n;
  entry["alpha"] = req.alpha;
  entry["replications"] = req.replications;
  entry["seed"] = req.seed;
  entry["grid"] = req.resolved_grid();
  doc[key] = entry;

  if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
  const auto tmp = std::filesystem::path(file_.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write threshold cache '" + tmp.string() + "'");
    out << doc.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, file_);
  return result;
}

}  // namespace hotspot
