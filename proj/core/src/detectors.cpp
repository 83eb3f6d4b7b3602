#include "hotspot/detectors.hpp"

#include <algorithm>
#include <cmath>

namespace hotspot {

double standardize(double numerator, double scale, bool& degenerate) noexcept {
  degenerate = false;
  if (scale >= kDegenerateScale) return numerator / scale;
  if (numerator == 0.0) return 0.0;
  degenerate = true;
  return numerator / kDegenerateScale;
}

double clamp_rho(double rho) noexcept {
  if (!std::isfinite(rho)) return 0.0;
  return std::clamp(rho, -kRhoClamp, kRhoClamp);
}

double mahalanobis(double t1, double t2, double rho) noexcept {
  const double q = (t1 * t1 - 2.0 * rho * t1 * t2 + t2 * t2) / (1.0 - rho * rho);
  return std::max(q, 0.0);
}

namespace {

struct Components {
  std::vector<double> t1;
  std::vector<double> t2;
  std::vector<std::uint8_t> flags1;  // degenerate flag per k, first detector
  std::vector<std::uint8_t> flags2;
};

Components standardized_components(const LocalMoments& m) {
  const auto n = m.d_mean.size();
  Components c;
  c.t1.resize(n);
  c.t2.resize(n);
  c.flags1.assign(n, 0);
  c.flags2.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    bool deg = false;
    c.t1[i] = standardize(m.d_mean[i], m.s_bar[i], deg);
    c.flags1[i] = deg ? 1 : 0;
    c.t2[i] = standardize(m.d_var[i], m.v_bar[i], deg);
    c.flags2[i] = deg ? 1 : 0;
  }
  return c;
}

double correlation(double numerator, double scale_a, double scale_b) {
  const double den = scale_a * scale_b;
  if (!(den >= kDegenerateScale)) return 0.0;
  return clamp_rho(numerator / den);
}

// Cross moments of one window of the pair (Y, X).
struct CrossMoments {
  double mm = 0.0;  // mean of dy * dx
  double mv = 0.0;  // mean of dy * dx^2
  double vm = 0.0;  // mean of dy^2 * dx
  double vv = 0.0;  // mean of (dy^2 - S_y^2)(dx^2 - S_x^2)
};

CrossMoments cross_moments(std::span<const double> y, std::span<const double> x, std::size_t a,
                           std::size_t b) {
  const auto my = window_moments(y, a, b);
  const auto mx = window_moments(x, a, b);
  const auto len = static_cast<double>(b - a + 1);
  CrossMoments c;
  for (std::size_t t = a; t <= b; ++t) {
    const double dy = y[t - 1] - my.mean;
    const double dx = x[t - 1] - mx.mean;
    c.mm += dy * dx;
    c.mv += dy * dx * dx;
    c.vm += dy * dy * dx;
    c.vv += (dy * dy - my.var) * (dx * dx - mx.var);
  }
  c.mm /= len;
  c.mv /= len;
  c.vm /= len;
  c.vv /= len;
  return c;
}

double pick(const CrossMoments& c, DetectorKind kind) {
  switch (kind) {
    case DetectorKind::YX: return c.mm;
    case DetectorKind::YX2: return c.mv;
    case DetectorKind::Y2X: return c.vm;
    case DetectorKind::Y2X2: return c.vv;
    default: return 0.0;
  }
}

bool uses_y_mean(DetectorKind kind) {
  return kind == DetectorKind::YX || kind == DetectorKind::YX2;
}
bool uses_x_mean(DetectorKind kind) {
  return kind == DetectorKind::YX || kind == DetectorKind::Y2X;
}

DetectorTrace univariate_from(const LocalMoments& m, const Components& c, DetectorKind kind) {
  const auto n = m.d_mean.size();
  DetectorTrace tr;
  tr.kind = kind;
  tr.cfg = m.cfg;
  tr.t1 = c.t1;
  tr.t2 = c.t2;
  tr.region = m.region;
  tr.rho.resize(n);
  tr.d2.resize(n);
  tr.flags.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    tr.rho[i] = correlation(m.k_bar[i], m.s_bar[i], m.v_bar[i]);
    tr.d2[i] = mahalanobis(tr.t1[i], tr.t2[i], tr.rho[i]);
    tr.flags[i] = static_cast<std::uint8_t>((c.flags1[i] ? kFirstDegenerate : 0) |
                                            (c.flags2[i] ? kSecondDegenerate : 0));
  }
  return tr;
}

/// Locally averaged cross moments for all k: interior points average the two
/// adjacent length-G windows, boundary points use the single 2G window.
std::vector<CrossMoments> averaged_cross(std::span<const double> y, std::span<const double> x,
                                         const WindowConfig& cfg) {
  const std::size_t n = cfg.n;
  const std::size_t g = cfg.bandwidth;
  std::vector<CrossMoments> windows(n - g + 1);
  for (std::size_t s = 1; s + g - 1 <= n; ++s) windows[s - 1] = cross_moments(y, x, s, s + g - 1);
  const auto head = cross_moments(y, x, 1, 2 * g);
  const auto tail = cross_moments(y, x, n - 2 * g + 1, n);

  std::vector<CrossMoments> out(n);
  for (std::size_t k = 1; k <= n; ++k) {
    switch (region_of(k, g, n)) {
      case Region::LeftBoundary: out[k - 1] = head; break;
      case Region::RightBoundary: out[k - 1] = tail; break;
      case Region::Interior: {
        const auto& l = windows[k - g];
        const auto& r = windows[k];
        out[k - 1] = {0.5 * (l.mm + r.mm), 0.5 * (l.mv + r.mv), 0.5 * (l.vm + r.vm),
                      0.5 * (l.vv + r.vv)};
        break;
      }
    }
  }
  return out;
}

DetectorTrace bivariate_from(const LocalMoments& my, const Components& cy, const LocalMoments& mx,
                             const Components& cx, const std::vector<CrossMoments>& cross,
                             DetectorKind kind) {
  const auto n = my.d_mean.size();
  const bool y_mean = uses_y_mean(kind);
  const bool x_mean = uses_x_mean(kind);
  DetectorTrace tr;
  tr.kind = kind;
  tr.cfg = my.cfg;
  tr.t1 = y_mean ? cy.t1 : cy.t2;
  tr.t2 = x_mean ? cx.t1 : cx.t2;
  tr.region = my.region;
  tr.rho.resize(n);
  tr.d2.resize(n);
  tr.flags.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double scale_y = y_mean ? my.s_bar[i] : my.v_bar[i];
    const double scale_x = x_mean ? mx.s_bar[i] : mx.v_bar[i];
    tr.rho[i] = correlation(pick(cross[i], kind), scale_y, scale_x);
    tr.d2[i] = mahalanobis(tr.t1[i], tr.t2[i], tr.rho[i]);
    const bool deg_y = y_mean ? cy.flags1[i] : cy.flags2[i];
    const bool deg_x = x_mean ? cx.flags1[i] : cx.flags2[i];
    tr.flags[i] = static_cast<std::uint8_t>((deg_y ? kFirstDegenerate : 0) |
                                            (deg_x ? kSecondDegenerate : 0));
  }
  return tr;
}

}  // namespace

std::vector<double> t1_trace(const ContinuousSeries& series, const WindowConfig& cfg) {
  return standardized_components(local_moments(series, cfg)).t1;
}

std::vector<double> t2_trace(const ContinuousSeries& series, const WindowConfig& cfg) {
  return standardized_components(local_moments(series, cfg)).t2;
}

DetectorTrace joint_univariate(const ContinuousSeries& series, const WindowConfig& cfg,
                               DetectorKind kind) {
  if (is_cross(kind)) throw InvalidArgument("joint_univariate needs UniY or UniX");
  const auto m = local_moments(series, cfg);
  return univariate_from(m, standardized_components(m), kind);
}

DetectorTrace joint_bivariate(const ContinuousSeries& y, const ContinuousSeries& x,
                              DetectorKind kind, const WindowConfig& cfg) {
  const std::array<DetectorKind, 1> kinds{kind};
  if (!is_cross(kind)) throw InvalidArgument("joint_bivariate needs a cross kind");
  return detector_traces(y, &x, kinds, cfg).at(kind);
}

std::map<DetectorKind, DetectorTrace> detector_traces(const ContinuousSeries& y,
                                                      const ContinuousSeries* x,
                                                      std::span<const DetectorKind> kinds,
                                                      const WindowConfig& cfg) {
  const bool need_x = std::any_of(kinds.begin(), kinds.end(), [](DetectorKind k) {
    return k != DetectorKind::UniY;
  });
  if (need_x && x == nullptr) throw InvalidArgument("detector kind requires a sensing series");
  if (x != nullptr && x->size() != y.size()) {
    throw InvalidArgument("length mismatch: y has " + std::to_string(y.size()) + " points, x has " +
                          std::to_string(x->size()));
  }

  const auto my = local_moments(y, cfg);
  const auto cy = standardized_components(my);
  std::optional<LocalMoments> mx;
  std::optional<Components> cx;
  if (need_x) {
    mx = local_moments(*x, cfg);
    cx = standardized_components(*mx);
  }
  std::vector<CrossMoments> cross;
  const bool need_cross = std::any_of(kinds.begin(), kinds.end(), is_cross);
  if (need_cross) cross = averaged_cross(y.values(), x->values(), my.cfg);

  std::map<DetectorKind, DetectorTrace> out;
  for (auto kind : kinds) {
    if (kind == DetectorKind::UniY) {
      out[kind] = univariate_from(my, cy, kind);
    } else if (kind == DetectorKind::UniX) {
      out[kind] = univariate_from(*mx, *cx, kind);
    } else {
      out[kind] = bivariate_from(my, cy, *mx, *cx, cross, kind);
    }
  }
  return out;
}

}  // namespace hotspot
