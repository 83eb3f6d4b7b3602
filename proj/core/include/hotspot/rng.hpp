#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace hotspot {

/// splitmix64 finaliser; used to derive independent sub-stream seeds.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for replication `index` of stream `stream` under `master`. Parallel
/// work draws from these so results do not depend on the schedule.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                                  std::uint64_t index) noexcept {
  return mix64(mix64(mix64(master) ^ (stream * 0x632be59bd9b4e019ULL)) + index);
}

/// Seedable 64-bit Mersenne twister with boost distributions, whose output
/// (unlike std:: distributions) is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return uniform_(engine_); }  // [0, 1)

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    double u = 0.0;
    do {
      u = uniform_(engine_);
    } while (u <= 0.0);
    return u;
  }

  double normal(double mean = 0.0, double sd = 1.0) {
    return mean + sd * normal_(engine_);
  }

  /// Uniform integer in the closed range [lo, hi].
  std::size_t index(std::size_t lo, std::size_t hi) {
    return boost::random::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }

 private:
  std::mt19937_64 engine_;
  boost::random::uniform_01<double> uniform_;
  boost::random::normal_distribution<double> normal_;
};

}  // namespace hotspot
