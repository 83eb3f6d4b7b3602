#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hotspot/series.hpp"
#include "hotspot/types.hpp"

namespace hotspot {

/// Population moments of one window X_a..X_b (divisor b-a+1).
struct WindowMoments {
  double mean = 0.0;
  double var = 0.0;     // S^2(a,b)
  double third = 0.0;   // K(a,b): mean of (X_t - mean)^3
  double kurt = 0.0;    // V^2(a,b): mean of ((X_t - mean)^2 - S^2)^2
};

/// Two-pass moments of the 1-based closed window [a, b].
[[nodiscard]] WindowMoments window_moments(std::span<const double> x, std::size_t a, std::size_t b);

[[nodiscard]] double segment_mean(const ContinuousSeries& series, std::size_t t1, std::size_t t2);
[[nodiscard]] double segment_var(const ContinuousSeries& series, std::size_t t1, std::size_t t2);

/// Local moment differences and locally averaged scales at every k = 1..n.
/// Arrays are 0-based: element k-1 belongs to time k.
struct LocalMoments {
  std::vector<double> d_mean;  // dX(k)
  std::vector<double> d_var;   // dS^2(k)
  std::vector<double> s_bar;   // locally averaged standard deviation
  std::vector<double> v_bar;   // square root of the locally averaged V^2
  std::vector<double> k_bar;   // locally averaged third central moment
  std::vector<Region> region;
  WindowConfig cfg;
};

/// All five traces in one pass over the length-G windows. Throws
/// InvalidArgument("bandwidth too large ...") when n < 2G.
[[nodiscard]] LocalMoments local_moments(const ContinuousSeries& series, const WindowConfig& cfg);

[[nodiscard]] std::vector<double> mean_diff_trace(const ContinuousSeries& series,
                                                  const WindowConfig& cfg);
[[nodiscard]] std::vector<double> var_diff_trace(const ContinuousSeries& series,
                                                 const WindowConfig& cfg);

struct AveragedScales {
  std::vector<double> s_bar;
  std::vector<double> v_bar;
  std::vector<double> k_bar;
};
[[nodiscard]] AveragedScales averaged_scales(const ContinuousSeries& series,
                                             const WindowConfig& cfg);

/// Normalising constants of the boundary partial sums: C_1 on the left,
/// C_n on the right.
[[nodiscard]] double left_boundary_constant(std::size_t k, std::size_t bandwidth);
[[nodiscard]] double right_boundary_constant(std::size_t k, std::size_t bandwidth, std::size_t n);

/// Fills cfg.n from the series length when it is 0, then validates. A
/// nonzero cfg.n that disagrees with `n` is an error.
[[nodiscard]] WindowConfig resolve_config(WindowConfig cfg, std::size_t n);

}  // namespace hotspot
