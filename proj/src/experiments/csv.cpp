#include "puredyn/experiments/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "puredyn/errors.hpp"

namespace puredyn::experiments {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {
std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path + "'");
  return out;
}
}  // namespace

SeriesWriter::SeriesWriter(const std::string& path, SeriesKey key)
    : path_(path), key_(std::move(key)), out_(open_or_throw(path)) {
  out_ << kSeriesHeader << '\n';
}

void SeriesWriter::write(std::uint64_t seed, const DiagnosticSeries& s) {
  const std::string prefix = key_.scenario_id + ',' + key_.model + ',' + std::to_string(key_.L) + ',' +
                             std::to_string(key_.q) + ',' + format_number(key_.delta_x) + ',' + key_.recipe_kind +
                             ',' + format_number(key_.kappa) + ',' + std::to_string(seed) + ',' + key_.theta + ',';
  for (std::size_t i = 0; i < s.size(); ++i)
    out_ << prefix << format_number(s.times[i]) << ',' << format_number(s.tau) << ',' << format_number(s.values[i])
         << '\n';
}

TableWriter::TableWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(open_or_throw(path)), width_(header.size()) {
  row(header);
}

void TableWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw DomainError("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
  out_.flush();
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw DomainError("CSV has no column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read '" + path + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw DomainError("'" + path + "' is empty");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) throw DomainError("ragged row in '" + path + "'");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace puredyn::experiments
