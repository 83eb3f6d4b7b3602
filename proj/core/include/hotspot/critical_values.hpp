#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace hotspot {

/// Monte-Carlo critical value request. The auto grid is 25..min((n-1)/2, 200).
struct ThresholdRequest {
  std::size_t n = 100;
  double alpha = 0.05;
  std::size_t replications = 1000;  // B
  std::uint64_t seed = 1;
  std::vector<std::size_t> grid;    // empty = auto_grid(n)

  [[nodiscard]] std::vector<std::size_t> resolved_grid() const;
  /// Stable key "n=..;alpha=..;B=..;seed=..;grid=<hash>".
  [[nodiscard]] std::string fingerprint() const;
};

[[nodiscard]] std::vector<std::size_t> auto_grid(std::size_t n);

/// The B replication maxima of sqrt(T1(h)^2 + T2(h)^2), sorted ascending.
/// T_m(h) = (W_m(h+g) - 2 W_m(h) + W_m(h-g)) / sqrt(2g) over g in the grid
/// and h in [g, n-g], with W_1, W_2 independent Gaussian random walks.
[[nodiscard]] std::vector<double> simulate_threshold_sample(const ThresholdRequest& req);

/// The ceil((1-alpha) B)-th smallest replication maximum.
[[nodiscard]] double threshold_from_sample(const std::vector<double>& sorted_maxima, double alpha);

[[nodiscard]] double simulate_threshold(const ThresholdRequest& req);

/// How D_n is compared with the traces. Direct: d2(k) > D_n. Normalized: the
/// detectors are taken on the random-walk scale, sqrt(G/2) T, and D(k) is
/// compared with D_n; on the unscaled traces that is d2(k) > 2 D_n^2 / G.
enum class ThresholdScale { Direct, Normalized };

[[nodiscard]] std::string_view to_string(ThresholdScale scale) noexcept;
[[nodiscard]] ThresholdScale parse_threshold_scale(std::string_view name);

/// The value that d2 traces of bandwidth G must exceed.
[[nodiscard]] double effective_threshold(double critical_value, std::size_t bandwidth,
                                         ThresholdScale scale);

/// JSON-file cache of computed thresholds keyed by request fingerprint.
class ThresholdCache {
 public:
  explicit ThresholdCache(std::filesystem::path file);

  struct Lookup {
    double value = 0.0;
    bool hit = false;
    std::vector<std::string> warnings;
  };

  /// Cached value on a fingerprint hit; otherwise computes, persists, returns.
  /// An unreadable cache file is replaced (with a warning), never fatal.
  /// `refresh` skips the lookup and overwrites the stored entry.
  Lookup get_or_compute(const ThresholdRequest& req, bool refresh = false);

  [[nodiscard]] const std::filesystem::path& path() const noexcept { return file_; }

  /// $HOTSPOT_CACHE_DIR/thresholds.json, falling back to ./.hotspot-cache.
  [[nodiscard]] static std::filesystem::path default_path();

 private:
  std::filesystem::path file_;
  std::mutex mutex_;
};

}  // namespace hotspot
