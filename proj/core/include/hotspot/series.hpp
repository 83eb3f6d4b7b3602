#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hotspot {

/// Real-valued, fixed-frequency series. All values finite, n >= 1.
class ContinuousSeries {
 public:
  ContinuousSeries() = default;
  explicit ContinuousSeries(std::vector<double> values);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  /// 1-based access, matching the time axis used throughout the library.
  [[nodiscard]] double at(std::size_t t) const { return values_.at(t - 1); }

 private:
  std::vector<double> values_;
};

/// Ordered categorical codes 1..levels (e.g. a 5-point Likert scale).
class DiscreteSeries {
 public:
  DiscreteSeries() = default;
  /// `levels == 0` means "infer": max(observed code, 2).
  explicit DiscreteSeries(std::vector<int> values, int levels = 0);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] int levels() const noexcept { return levels_; }
  [[nodiscard]] std::span<const int> values() const noexcept { return values_; }

 private:
  std::vector<int> values_;
  int levels_ = 0;
};

/// Empirical category distribution of a whole discrete series; index y-1
/// holds category y.
struct CategoricalEstimate {
  std::vector<double> pmf;
  std::vector<double> cdf_left;  // F(y-) = sum of pmf over categories < y

  [[nodiscard]] double pmf_of(int y) const { return pmf.at(static_cast<std::size_t>(y - 1)); }
  [[nodiscard]] double cdf_left_of(int y) const {
    return cdf_left.at(static_cast<std::size_t>(y - 1));
  }
};

/// Audit trail of the randomized inverse-CDF transform.
struct TransformRecord {
  std::vector<double> u;  // U_t, before clamping
  std::vector<double> w;  // raw uniform draws W_t
  std::vector<double> cdf_left;
  std::vector<double> pmf;
  std::uint64_t seed = 0;
};

struct TransformResult {
  ContinuousSeries series;
  TransformRecord record;
};

/// Clamp applied to U before the normal quantile so Z stays finite.
inline constexpr double kUniformClamp = 1e-12;

[[nodiscard]] CategoricalEstimate estimate_categorical(const DiscreteSeries& series);

/// Z_t = Phi^{-1}(F(Y_t-) + W_t * P(Y_t)) with W_t ~ Unif(0,1) drawn from `seed`.
[[nodiscard]] TransformResult to_continuous(const DiscreteSeries& series, std::uint64_t seed);

/// Same transform with caller-supplied draws W_t (one per observation, each in (0,1)).
[[nodiscard]] TransformResult to_continuous_with_draws(const DiscreteSeries& series,
                                                       std::span<const double> draws,
                                                       std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// CSV ingestion

/// A parsed CSV file: header plus raw cells. Row numbers in error messages are
/// 1-based file lines (the header is line 1).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // file line of each row

  [[nodiscard]] std::size_t column_index(const std::string& name) const;
};

[[nodiscard]] CsvTable read_csv_table(const std::filesystem::path& path);
[[nodiscard]] CsvTable parse_csv_table(const std::string& text);

enum class ColumnKind { Continuous, Discrete };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  int levels = 0;  // discrete only; 0 = infer
};

[[nodiscard]] ContinuousSeries continuous_column(const CsvTable& table, const std::string& name);
[[nodiscard]] DiscreteSeries discrete_column(const CsvTable& table, const std::string& name,
                                             int levels = 0);

[[nodiscard]] std::variant<ContinuousSeries, DiscreteSeries> load_csv(
    const std::filesystem::path& path, const ColumnSpec& column);

/// Writes "t,<name>" with a 1-based index and shortest round-trip decimals.
void write_csv(const std::filesystem::path& path, const std::string& name,
               const ContinuousSeries& series);
void write_csv(const std::filesystem::path& path, const std::string& name,
               const DiscreteSeries& series);

/// Shortest decimal representation that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

}  // namespace hotspot
