#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "puredyn/series.hpp"

namespace puredyn::experiments {

/// 17 significant digits; NaN and infinities as nan/inf/-inf.
std::string format_number(double v);

/// Identifying columns shared by every long-form series file.
struct SeriesKey {
  std::string scenario_id;
  std::string model;
  int L = 0;
  int q = 0;
  double delta_x = 0.0;
  std::string recipe_kind;
  double kappa = 0.0;
  std::string theta;
};

inline constexpr const char* kSeriesHeader = "scenario_id,model,L,q,delta_X,recipe_kind,kappa,seed,theta,t,tau,value";

/// Long-form CSV writer: one row per (seed, t).
class SeriesWriter {
 public:
  SeriesWriter(const std::string& path, SeriesKey key);
  void write(std::uint64_t seed, const DiagnosticSeries& s);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  SeriesKey key_;
  std::ofstream out_;
};

/// Plain CSV table with a header and pre-formatted cells.
class TableWriter {
 public:
  TableWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t width_;
};

/// Read a CSV with a header row into column-name-indexed string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t column(const std::string& name) const;
};
CsvTable read_csv(const std::string& path);

}  // namespace puredyn::experiments
