#include "hotspot/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "hotspot/rng.hpp"
#include "hotspot/types.hpp"

namespace hotspot {

ContinuousSeries::ContinuousSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("empty input");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidArgument("non-finite value at t=" + std::to_string(i + 1));
    }
  }
}

DiscreteSeries::DiscreteSeries(std::vector<int> values, int levels)
    : values_(std::move(values)), levels_(levels) {
  if (values_.empty()) throw InvalidArgument("empty input");
  const int max_code = *std::max_element(values_.begin(), values_.end());
  if (levels_ == 0) levels_ = std::max(max_code, 2);
  if (levels_ < 2) throw InvalidArgument("a discrete series needs at least 2 levels");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 1 || values_[i] > levels_) {
      throw InvalidArgument("category " + std::to_string(values_[i]) + " at t=" +
                            std::to_string(i + 1) + " outside 1.." + std::to_string(levels_));
    }
  }
}

CategoricalEstimate estimate_categorical(const DiscreteSeries& series) {
  if (series.size() == 0) throw InvalidArgument("empty input");
  const auto levels = static_cast<std::size_t>(series.levels());
  std::vector<std::size_t> counts(levels, 0);
  for (int y : series.values()) ++counts[static_cast<std::size_t>(y - 1)];

  CategoricalEstimate est;
  est.pmf.resize(levels);
  est.cdf_left.resize(levels);
  const auto n = static_cast<double>(series.size());
  std::size_t below = 0;
  for (std::size_t c = 0; c < levels; ++c) {
    est.pmf[c] = static_cast<double>(counts[c]) / n;
    est.cdf_left[c] = static_cast<double>(below) / n;
    below += counts[c];
  }
  return est;
}

TransformResult to_continuous_with_draws(const DiscreteSeries& series,
                                         std::span<const double> draws, std::uint64_t seed) {
  if (draws.size() != series.size()) {
    throw InvalidArgument("need one uniform draw per observation");
  }
  const auto est = estimate_categorical(series);
  const boost::math::normal_distribution<double> standard;

  TransformRecord record;
  record.seed = seed;
  record.cdf_left = est.cdf_left;
  record.pmf = est.pmf;
  record.w.assign(draws.begin(), draws.end());
  record.u.resize(series.size());

  std::vector<double> z(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    const int y = series.values()[t];
    const double u = est.cdf_left_of(y) + draws[t] * est.pmf_of(y);
    record.u[t] = u;
    z[t] = boost::math::quantile(standard, std::clamp(u, kUniformClamp, 1.0 - kUniformClamp));
  }
  return {ContinuousSeries(std::move(z)), std::move(record)};
}

TransformResult to_continuous(const DiscreteSeries& series, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> draws(series.size());
  for (auto& w : draws) w = rng.uniform_open();
  return to_continuous_with_draws(series, draws, seed);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(ch);
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

template <typename T>
T parse_cell(const std::string& cell, const std::string& column, std::size_t line) {
  const auto where = [&] { return "column '" + column + "', line " + std::to_string(line); };
  if (cell.empty()) throw ParseError("blank cell in " + where());
  T value{};
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("non-numeric cell '" + cell + "' in " + where());
  }
  return value;
}

}  // namespace

std::size_t CsvTable::column_index(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ParseError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv_table(const std::string& text) {
  std::istringstream in(text);
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (table.header.empty()) {
      if (trim(line).empty()) continue;
      table.header = split_line(line);
      continue;
    }
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      throw ParseError("line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                       " cells, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(line_no);
  }
  if (table.header.empty()) throw ParseError("empty file");
  if (table.rows.empty()) throw ParseError("no data rows");
  return table;
}

CsvTable read_csv_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv_table(buffer.str());
}

ContinuousSeries continuous_column(const CsvTable& table, const std::string& name) {
  const auto col = table.column_index(name);
  std::vector<double> values;
  values.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double v = parse_cell<double>(table.rows[r][col], name, table.line_numbers[r]);
    if (!std::isfinite(v)) throw ParseError("non-finite value in column '" + name + "', line " +
                                            std::to_string(table.line_numbers[r]));
    values.push_back(v);
  }
  return ContinuousSeries(std::move(values));
}

DiscreteSeries discrete_column(const CsvTable& table, const std::string& name, int levels) {
  const auto col = table.column_index(name);
  std::vector<int> values;
  values.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    values.push_back(parse_cell<int>(table.rows[r][col], name, table.line_numbers[r]));
  }
  try {
    return DiscreteSeries(std::move(values), levels);
  } catch (const InvalidArgument& e) {
    throw ParseError("column '" + name + "': " + e.what());
  }
}

std::variant<ContinuousSeries, DiscreteSeries> load_csv(const std::filesystem::path& path,
                                                        const ColumnSpec& column) {
  const auto table = read_csv_table(path);
  if (column.kind == ColumnKind::Discrete) {
    return discrete_column(table, column.name, column.levels);
  }
  return continuous_column(table, column.name);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_csv(const std::filesystem::path& path, const std::string& name,
               const ContinuousSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "t," << name << '\n';
  for (std::size_t t = 1; t <= series.size(); ++t) {
    out << t << ',' << format_double(series.at(t)) << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const std::string& name,
               const DiscreteSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "t," << name << '\n';
  for (std::size_t t = 0; t < series.size(); ++t) {
    out << (t + 1) << ',' << series.values()[t] << '\n';
  }
}

}  // namespace hotspot
