#include "windtap/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace windtap {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

void expect_header(std::ifstream& in, const std::string& expected,
                   const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line) || line != expected) {
    throw CsvFormatError(path.string() + ": expected header '" + expected + "'");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw CsvFormatError("malformed number '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& ts) {
  auto out = open_out(path);
  out << "time_s,pressure_pa\n";
  for (std::size_t k = 0; k < ts.values.size(); ++k) {
    out << format_double(ts.time_at(k)) << ',' << format_double(ts.values[k]) << '\n';
  }
}

TimeSeries read_series_csv(const std::filesystem::path& path, const std::string& channel) {
  auto in = open_in(path);
  expect_header(in, "time_s,pressure_pa", path);
  TimeSeries ts;
  ts.channel = channel.empty() ? path.stem().string() : channel;
  std::string line;
  std::vector<double> times;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) {
      throw CsvFormatError(path.string() + ": malformed row '" + line + "'");
    }
    times.push_back(parse_double(fields[0]));
    ts.values.push_back(parse_double(fields[1]));
  }
  if (times.size() < 2) {
    throw CsvFormatError(path.string() + ": fewer than 2 samples");
  }
  ts.start_time = times.front();
  const double raw_rate =
      static_cast<double>(times.size() - 1) / (times.back() - times.front());
  // Timestamps are quantized by formatting; snap the reconstructed rate.
  ts.sample_rate = std::round(raw_rate * 1e6) / 1e6;
  return ts;
}

void write_aggregates_csv(const std::filesystem::path& path,
                          const std::vector<AggregateRow>& rows) {
  auto out = open_out(path);
  out << "run_id,station_xc,kind,aoa_deg,mean_pa,std_pa,n\n";
  for (const auto& r : rows) {
    out << r.run_id << ',' << format_double(r.station_xc) << ',' << to_string(r.kind)
        << ',' << format_double(r.aoa_deg) << ',' << format_double(r.mean_pa) << ','
        << format_double(r.std_pa) << ',' << r.n << '\n';
  }
}

std::vector<AggregateRow> read_aggregates_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  expect_header(in, "run_id,station_xc,kind,aoa_deg,mean_pa,std_pa,n", path);
  std::vector<AggregateRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 7) {
      throw CsvFormatError(path.string() + ": malformed row '" + line + "'");
    }
    AggregateRow r;
    r.run_id = fields[0];
    r.station_xc = parse_double(fields[1]);
    r.kind = sensor_kind_from_string(fields[2]);
    r.aoa_deg = parse_double(fields[3]);
    r.mean_pa = parse_double(fields[4]);
    r.std_pa = parse_double(fields[5]);
    r.n = static_cast<std::size_t>(parse_double(fields[6]));
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_comparison_csv(const std::filesystem::path& path,
                          const ComparisonReport& report) {
  auto out = open_out(path);
  out << "station_xc,mean_error_pct,std_error_pct\n";
  for (const auto& e : report.per_station) {
    out << format_double(e.x_c) << ',' << format_double(e.mean_error_pct) << ','
        << format_double(e.std_error_pct) << '\n';
  }
}

void write_impact_csv(const std::filesystem::path& path, const ImpactReport& report) {
  auto out = open_out(path);
  out << "station_xc,onset_shift_deg,peak_std_ratio\n";
  for (const auto& e : report.per_station) {
    out << format_double(e.x_c) << ','
        << (e.onset_shift_deg ? format_double(*e.onset_shift_deg) : std::string())
        << ',' << format_double(e.peak_std_ratio) << '\n';
  }
}

}  // namespace windtap
