#include "hotspot/local_stats.hpp"

#include <cmath>

namespace hotspot {

WindowMoments window_moments(std::span<const double> x, std::size_t a, std::size_t b) {
  if (a < 1 || a > b || b > x.size()) {
    throw InvalidArgument("window [" + std::to_string(a) + "," + std::to_string(b) +
                          "] outside 1.." + std::to_string(x.size()));
  }
  const auto len = static_cast<double>(b - a + 1);
  double sum = 0.0;
  for (std::size_t t = a; t <= b; ++t) sum += x[t - 1];
  WindowMoments m;
  m.mean = sum / len;

  double s2 = 0.0;
  double s3 = 0.0;
  for (std::size_t t = a; t <= b; ++t) {
    const double d = x[t - 1] - m.mean;
    s2 += d * d;
    s3 += d * d * d;
  }
  m.var = s2 / len;
  m.third = s3 / len;

  double s4 = 0.0;
  for (std::size_t t = a; t <= b; ++t) {
    const double d = x[t - 1] - m.mean;
    const double e = d * d - m.var;
    s4 += e * e;
  }
  m.kurt = s4 / len;
  return m;
}

double segment_mean(const ContinuousSeries& series, std::size_t t1, std::size_t t2) {
  return window_moments(series.values(), t1, t2).mean;
}

double segment_var(const ContinuousSeries& series, std::size_t t1, std::size_t t2) {
  return window_moments(series.values(), t1, t2).var;
}

WindowConfig resolve_config(WindowConfig cfg, std::size_t n) {
  if (cfg.n == 0) cfg.n = n;
  if (cfg.n != n) {
    throw InvalidArgument("configuration is for n=" + std::to_string(cfg.n) +
                          " but the series has " + std::to_string(n) + " points");
  }
  cfg.validate();
  return cfg;
}

double left_boundary_constant(std::size_t k, std::size_t bandwidth) {
  const auto kk = static_cast<double>(k);
  const auto g2 = 2.0 * static_cast<double>(bandwidth);
  return 2.0 / std::sqrt(kk * (g2 - kk));
}

double right_boundary_constant(std::size_t k, std::size_t bandwidth, std::size_t n) {
  const auto kk = static_cast<double>(k);
  const auto nn = static_cast<double>(n);
  const auto g2 = 2.0 * static_cast<double>(bandwidth);
  return 2.0 / std::sqrt((nn + 1.0 - kk) * (kk - nn + g2));
}

LocalMoments local_moments(const ContinuousSeries& series, const WindowConfig& config) {
  const auto cfg = resolve_config(config, series.size());
  const auto x = series.values();
  const std::size_t n = cfg.n;
  const std::size_t g = cfg.bandwidth;

  // Length-G windows indexed by their first time point minus one.
  std::vector<WindowMoments> windows(n - g + 1);
  for (std::size_t s = 1; s + g - 1 <= n; ++s) windows[s - 1] = window_moments(x, s, s + g - 1);
  const auto head = window_moments(x, 1, 2 * g);
  const auto tail = window_moments(x, n - 2 * g + 1, n);

  LocalMoments out;
  out.cfg = cfg;
  out.d_mean.resize(n);
  out.d_var.resize(n);
  out.s_bar.resize(n);
  out.v_bar.resize(n);
  out.k_bar.resize(n);
  out.region.resize(n);

  for (std::size_t k = 1; k <= n; ++k) {
    const auto i = k - 1;
    const Region region = region_of(k, g, n);
    out.region[i] = region;
    switch (region) {
      case Region::LeftBoundary: {
        const double c1 = left_boundary_constant(k, g);
        double dm = 0.0;
        double dv = 0.0;
        for (std::size_t t = 1; t <= k; ++t) {
          const double dev = x[t - 1] - head.mean;
          dm += head.mean - x[t - 1];
          dv += head.var - dev * dev;
        }
        out.d_mean[i] = c1 * dm;
        out.d_var[i] = c1 * dv;
        out.s_bar[i] = std::sqrt(head.var);
        out.v_bar[i] = std::sqrt(head.kurt);
        out.k_bar[i] = head.third;
        break;
      }
      case Region::Interior: {
        const auto& left = windows[k - g];  // [k-G+1, k]
        const auto& right = windows[k];     // [k+1, k+G]
        out.d_mean[i] = right.mean - left.mean;
        out.d_var[i] = right.var - left.var;
        out.s_bar[i] = std::sqrt(0.5 * (right.var + left.var));
        out.v_bar[i] = std::sqrt(0.5 * (right.kurt + left.kurt));
        out.k_bar[i] = 0.5 * (right.third + left.third);
        break;
      }
      case Region::RightBoundary: {
        const double cn = right_boundary_constant(k, g, n);
        double dm = 0.0;
        double dv = 0.0;
        // Mirror of the left boundary: sum over the trailing k..n, signed
        // so that a rise after k is positive as in the interior.
        for (std::size_t t = k; t <= n; ++t) {
          const double dev = x[t - 1] - tail.mean;
          dm += x[t - 1] - tail.mean;
          dv += dev * dev - tail.var;
        }
        out.d_mean[i] = cn * dm;
        out.d_var[i] = cn * dv;
        out.s_bar[i] = std::sqrt(tail.var);
        out.v_bar[i] = std::sqrt(tail.kurt);
        out.k_bar[i] = tail.third;
        break;
      }
    }
  }
  return out;
}

std::vector<double> mean_diff_trace(const ContinuousSeries& series, const WindowConfig& cfg) {
  return local_moments(series, cfg).d_mean;
}

std::vector<double> var_diff_trace(const ContinuousSeries& series, const WindowConfig& cfg) {
  return local_moments(series, cfg).d_var;
}

AveragedScales averaged_scales(const ContinuousSeries& series, const WindowConfig& cfg) {
  auto m = local_moments(series, cfg);
  return {std::move(m.s_bar), std::move(m.v_bar), std::move(m.k_bar)};
}

}  // namespace hotspot
