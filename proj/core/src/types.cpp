#include "hotspot/types.hpp"

#include <algorithm>
#include <cmath>

namespace hotspot {

std::string_view to_string(DetectorKind kind) noexcept {
  switch (kind) {
    case DetectorKind::UniY: return "UniY";
    case DetectorKind::UniX: return "UniX";
    case DetectorKind::YX: return "YX";
    case DetectorKind::YX2: return "YX2";
    case DetectorKind::Y2X: return "Y2X";
    case DetectorKind::Y2X2: return "Y2X2";
  }
  return "?";
}

DetectorKind parse_kind(std::string_view name) {
  for (auto kind : kAllKinds) {
    if (name == to_string(kind)) return kind;
  }
  if (name == "Y") return DetectorKind::UniY;
  if (name == "X") return DetectorKind::UniX;
  if (name == "YX²") return DetectorKind::YX2;
  if (name == "Y²X") return DetectorKind::Y2X;
  if (name == "Y²X²") return DetectorKind::Y2X2;
  throw InvalidArgument("unknown detector kind '" + std::string(name) + "'");
}

void WindowConfig::validate() const {
  if (bandwidth < 1) throw InvalidArgument("bandwidth must be at least 1");
  if (n < 2 * bandwidth) {
    throw InvalidArgument("bandwidth too large: G=" + std::to_string(bandwidth) +
                          " needs n >= " + std::to_string(2 * bandwidth) +
                          ", got n=" + std::to_string(n));
  }
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("eta must lie in (0,1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
}

std::size_t WindowConfig::screening_radius() const noexcept {
  return static_cast<std::size_t>(std::ceil(eta * static_cast<double>(bandwidth) - 1e-9));
}

Region region_of(std::size_t k, std::size_t bandwidth, std::size_t n) noexcept {
  if (k < bandwidth) return Region::LeftBoundary;
  if (k + bandwidth > n) return Region::RightBoundary;
  return Region::Interior;
}

std::size_t upper_order_index(double alpha, std::size_t count) {
  if (count == 0) throw InvalidArgument("order statistic of an empty sample");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0,1)");
  // The 1e-9 slack keeps e.g. (1 - 0.05) * 1000 from rounding up to 951.
  const double raw = std::ceil((1.0 - alpha) * static_cast<double>(count) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), 1, count);
}

}  // namespace hotspot
