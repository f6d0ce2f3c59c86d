// windtap: blade surface-pressure campaign toolkit.
// Subcommands: simulate, process, analyze, compare.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "windtap/campaign.hpp"

namespace fs = std::filesystem;
using namespace windtap;

namespace {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel g_log_level = LogLevel::info;

void log_at(LogLevel level, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (level <= g_log_level) {
    std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << "\n";
  }
}

LogLevel parse_log_level(const std::string& s) {
  if (s == "error") return LogLevel::error;
  if (s == "warn") return LogLevel::warn;
  if (s == "info") return LogLevel::info;
  if (s == "debug") return LogLevel::debug;
  throw CLI::ValidationError("--log-level", "expected error|warn|info|debug");
}

fs::path default_out_root() {
  if (const char* env = std::getenv("WINDTAP_OUT")) return env;
  return ".";
}

int cmd_simulate(const fs::path& manifest_path, fs::path out_dir,
                 std::optional<std::uint64_t> seed) {
  CampaignManifest manifest = load_manifest(manifest_path);
  if (seed) manifest.seed = *seed;
  log_at(LogLevel::info, "simulating campaign '" + manifest.campaign_id + "': " +
                             std::to_string(manifest.aoa_list.size()) + " AoAs x " +
                             std::to_string(manifest.blade_states.size()) + " blade states");
  const auto runs = simulate_campaign(manifest);
  write_campaign(runs, manifest, out_dir);
  log_at(LogLevel::info, "wrote " + std::to_string(runs.size()) + " runs to " +
                             out_dir.string());
  return 0;
}

int cmd_process(const fs::path& run_index, fs::path out_dir,
                std::optional<double> alpha, double reference_aoa) {
  const auto loaded = load_campaign(run_index);
  ProcessOptions options;
  options.alpha_override = alpha;
  options.reference_aoa = reference_aoa;
  const auto result = process_campaign(loaded.runs, options);

  fs::create_directories(out_dir);
  write_aggregates_csv(out_dir / "aggregates.csv", result.aggregates);
  {
    std::ofstream cal(out_dir / "calibration.json", std::ios::binary);
    cal << "{\n  \"alpha\": " << format_double(result.calibration.alpha)
        << ",\n  \"reference_aoa\": " << format_double(result.calibration.reference_aoa)
        << ",\n  \"overridden\": " << (alpha ? "true" : "false") << "\n}\n";
  }
  log_at(LogLevel::info, "alpha = " + format_double(result.calibration.alpha) +
                             " (reference AoA " + format_double(reference_aoa) + ")");

  bool failed = false;
  for (const auto& msg : loaded.failed_runs) {
    log_at(LogLevel::error, "load failed: " + msg);
    failed = true;
  }
  for (const auto& msg : result.failed_runs) {
    log_at(LogLevel::error, "processing failed: " + msg);
    failed = true;
  }
  if (failed) {
    log_at(LogLevel::warn, "partial results written for the unaffected runs");
    return 1;
  }
  return 0;
}

int cmd_analyze(const fs::path& aggregates_path, fs::path out_dir) {
  const auto rows = read_aggregates_csv(aggregates_path);
  AnalysisOptions options;
  const auto outputs = analyze_aggregates(rows, out_dir, options);
  for (const auto& note : outputs.notes) log_at(LogLevel::info, note);
  log_at(LogLevel::info, "wrote " + std::to_string(outputs.files.size()) +
                             " report files to " + out_dir.string());
  return 0;
}

int cmd_compare(const fs::path& path_a, const fs::path& path_b, fs::path out_dir,
                double pairing_distance) {
  const auto rows_a = read_aggregates_csv(path_a);
  const auto rows_b = read_aggregates_csv(path_b);
  const auto report = compare_aggregates(rows_a, rows_b, pairing_distance);
  fs::create_directories(out_dir);
  write_comparison_csv(out_dir / "comparison.csv", report);
  for (const auto& e : report.per_station) {
    log_at(LogLevel::info, "x/c " + format_double(e.x_c) + ": mean error " +
                               format_double(e.mean_error_pct) + "%, std error " +
                               format_double(e.std_error_pct) + "%");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"windtap: surface-pressure measurement campaign toolkit"};
  app.require_subcommand(1);

  std::string log_level = "info";
  app.add_option("--log-level", log_level, "error|warn|info|debug")
      ->capture_default_str();

  fs::path manifest_path, input_path, input_b, out_dir = default_out_root();
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  double reference_aoa = 24.0;
  double pairing_distance = 0.05;

  auto* sim = app.add_subcommand("simulate", "emulate a campaign from a manifest");
  sim->add_option("--manifest,--input", manifest_path, "campaign manifest (JSON)")
      ->required();
  sim->add_option("--out", out_dir, "output directory");
  sim->add_option("--seed", seed, "override the manifest seed");

  auto* proc = app.add_subcommand("process", "run the normalization pipeline");
  proc->add_option("--input,--manifest", input_path, "run index (JSON)")->required();
  proc->add_option("--out", out_dir, "output directory");
  proc->add_option("--alpha", alpha, "override the calibration coefficient");
  proc->add_option("--reference-aoa", reference_aoa, "alpha calibration AoA")
      ->capture_default_str();

  auto* ana = app.add_subcommand("analyze", "emit plot-ready analysis reports");
  ana->add_option("--input", input_path, "aggregates CSV")->required();
  ana->add_option("--out", out_dir, "output directory");

  auto* cmp = app.add_subcommand("compare", "system-vs-system error report");
  cmp->add_option("--input", input_path, "aggregates CSV (system under test)")->required();
  cmp->add_option("--reference", input_b, "aggregates CSV (reference system)")->required();
  cmp->add_option("--out", out_dir, "output directory");
  cmp->add_option("--pairing-distance", pairing_distance,
                  "max mems-to-tap pairing distance, chord fraction")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    g_log_level = parse_log_level(log_level);
    if (sim->parsed()) return cmd_simulate(manifest_path, out_dir, seed);
    if (proc->parsed()) return cmd_process(input_path, out_dir, alpha, reference_aoa);
    if (ana->parsed()) return cmd_analyze(input_path, out_dir);
    if (cmp->parsed()) return cmd_compare(input_path, input_b, out_dir, pairing_distance);
  } catch (const ManifestError& e) {
    std::cerr << "manifest validation failed at field " << e.field() << ": " << e.what()
              << "\n";
    return 2;
  } catch (const CsvFormatError& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
