#include "starcore/summary.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "starcore/errors.hpp"

namespace starcore {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw InvariantError("number formatting failed");
  return std::string(buf, end);
}

std::string format_number(std::uint64_t v) {
  char buf[24];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

std::string format_number(std::int64_t v) {
  char buf[24];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

std::string format_number(std::uint32_t v) {
  return format_number(static_cast<std::uint64_t>(v));
}

std::string format_number(int v) {
  return format_number(static_cast<std::int64_t>(v));
}

CsvWriter::CsvWriter(const std::vector<std::string>& columns)
    : columns_(columns.size()) {
  body_ = "# schema_version=" + format_number(kSchemaVersion) + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) body_ += ',';
    body_ += columns[i];
  }
  body_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw InvariantError("csv row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << body_;
  if (!out) throw ConfigError("write failed: " + path);
}

Aggregate aggregate(const std::vector<double>& xs) {
  Aggregate a;
  a.count = xs.size();
  if (xs.empty()) return a;
  double sum = 0;
  for (double x : xs) sum += x;
  a.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return a;
  double ss = 0;
  for (double x : xs) ss += (x - a.mean) * (x - a.mean);
  double var = ss / static_cast<double>(xs.size() - 1);
  a.stderr_mean = std::sqrt(var / static_cast<double>(xs.size()));
  return a;
}

nlohmann::json aggregate_json(const std::vector<double>& xs) {
  Aggregate a = aggregate(xs);
  return {{"mean", a.mean}, {"stderr", a.stderr_mean}, {"count", a.count}};
}

}  // namespace starcore
