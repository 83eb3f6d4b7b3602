#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hotspot {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad indices, bandwidth too large, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// CSV / JSON ingestion failure.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The six detector targets. Cross kinds name (feature of Y, feature of X):
/// "Y" / "X" is the mean, "Y2" / "X2" the variance.
enum class DetectorKind { UniY, UniX, YX, YX2, Y2X, Y2X2 };

inline constexpr std::array<DetectorKind, 6> kAllKinds = {
    DetectorKind::UniY, DetectorKind::UniX, DetectorKind::YX,
    DetectorKind::YX2,  DetectorKind::Y2X,  DetectorKind::Y2X2};

inline constexpr std::array<DetectorKind, 4> kCrossKinds = {
    DetectorKind::YX, DetectorKind::YX2, DetectorKind::Y2X, DetectorKind::Y2X2};

[[nodiscard]] constexpr bool is_cross(DetectorKind kind) noexcept {
  return kind != DetectorKind::UniY && kind != DetectorKind::UniX;
}

[[nodiscard]] std::string_view to_string(DetectorKind kind) noexcept;

/// Accepts the canonical names ("UniY", "YX2", ...) plus the superscript
/// spellings "YX²", "Y²X", "Y²X²".
[[nodiscard]] DetectorKind parse_kind(std::string_view name);

/// Bandwidth and screening configuration shared by every detector.
struct WindowConfig {
  std::size_t bandwidth = 20;  // G
  std::size_t n = 0;           // series length
  double eta = 0.2;            // screening fraction
  double alpha = 0.05;         // significance level

  /// Throws InvalidArgument unless 1 <= G, 2G <= n, eta and alpha in (0,1).
  void validate() const;

  /// ceil(eta * G): radius of the suppression neighbourhood used in screening.
  [[nodiscard]] std::size_t screening_radius() const noexcept;
};

/// Closed integer interval [lo, hi] on the 1-based time axis.
struct Interval {
  long lo = 0;
  long hi = 0;

  [[nodiscard]] long length() const noexcept { return hi - lo + 1; }
  [[nodiscard]] bool contains(long k) const noexcept { return lo <= k && k <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Which of the three formula regimes applies at a time index.
enum class Region : unsigned char { LeftBoundary, Interior, RightBoundary };

/// Region of the 1-based index k for bandwidth G on a length-n series.
[[nodiscard]] Region region_of(std::size_t k, std::size_t bandwidth, std::size_t n) noexcept;

/// Index of the order statistic used for every "100(1-alpha)th percentile" in
/// the library: ceil((1 - alpha) * count), clamped to [1, count]. 1-based.
[[nodiscard]] std::size_t upper_order_index(double alpha, std::size_t count);

}  // namespace hotspot
