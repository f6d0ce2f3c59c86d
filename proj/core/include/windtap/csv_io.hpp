#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "windtap/analysis.hpp"
#include "windtap/time_series.hpp"

namespace windtap {

/// Malformed CSV content (as opposed to I/O failures).
class CsvFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal representation (std::to_chars), so every
/// emitted CSV re-ingests bit-exactly.
std::string format_double(double v);

/// Parse helpers; throw std::runtime_error with the offending text.
double parse_double(const std::string& s);
std::vector<std::string> split_csv_line(const std::string& line);

/// Channel files: header `time_s,pressure_pa`.
void write_series_csv(const std::filesystem::path& path, const TimeSeries& ts);
TimeSeries read_series_csv(const std::filesystem::path& path,
                           const std::string& channel = "");

/// One aggregate row of the emitted aggregates table.
struct AggregateRow {
  std::string run_id;
  double station_xc = 0.0;
  SensorKind kind = SensorKind::mems;
  double aoa_deg = 0.0;
  double mean_pa = 0.0;
  double std_pa = 0.0;
  std::size_t n = 0;
};

/// Aggregates: header `run_id,station_xc,kind,aoa_deg,mean_pa,std_pa,n`.
void write_aggregates_csv(const std::filesystem::path& path,
                          const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> read_aggregates_csv(const std::filesystem::path& path);

/// Report tables with the headers fixed by the toolkit's output contract.
void write_comparison_csv(const std::filesystem::path& path,
                          const ComparisonReport& report);
void write_impact_csv(const std::filesystem::path& path, const ImpactReport& report);

}  // namespace windtap
