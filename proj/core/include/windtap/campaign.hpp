#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "windtap/csv_io.hpp"
#include "windtap/manifest.hpp"
#include "windtap/pipeline.hpp"

namespace windtap {

/// One emulated channel of a run; `stationary` is only populated for MEMS
/// channels (wind-off atmospheric reference segment).
struct SimulatedChannel {
  ChordStation station;
  TimeSeries recorded;
  TimeSeries stationary;
  std::vector<double> pulses;   // sync pulse times in the stream's own clock
  double clock_offset = 0.0;    // s, what the stream clock adds to true time
};

struct SimulatedRun {
  std::string run_id;
  BladeState blade_state = BladeState::clean;
  double aoa = 0.0;  // deg
  FlowConditions conditions;
  ScannerSpec scanner_spec;  // acquiring chain, needed for tube compensation
  std::vector<SimulatedChannel> channels;
};

std::string make_run_id(const std::string& campaign_id, BladeState state, double aoa);
/// Blade state encoded in the run id ("<campaign>__<state>__aoa<val>");
/// nullopt when the id does not carry one.
std::optional<BladeState> blade_state_from_run_id(const std::string& run_id);

/// Deterministic emulation of the full campaign (all states x AoAs).
std::vector<SimulatedRun> simulate_campaign(const CampaignManifest& manifest);

/// Writes per-channel CSVs, stationary CSVs and the run-index JSON.
void write_campaign(const std::vector<SimulatedRun>& runs,
                    const CampaignManifest& manifest,
                    const std::filesystem::path& out_dir);

/// Result of reading a run index back; runs whose files are missing or
/// malformed are reported instead of aborting the whole campaign.
struct LoadReport {
  std::vector<SimulatedRun> runs;
  std::vector<std::string> failed_runs;  // "run_id: reason"
};

LoadReport load_campaign(const std::filesystem::path& run_index);

struct ProcessOptions {
  std::optional<double> alpha_override;
  double reference_aoa = 24.0;  // deg, alpha calibration point
  double outlier_k = 6.0;
  double tube_gain_limit = 20.0;
  double target_rate = 0.0;  // Hz; 0 picks the slowest channel rate
};

struct ProcessResult {
  std::vector<AggregateRow> aggregates;
  CalibrationParams calibration;
  std::vector<std::string> failed_runs;  // "run_id: reason"
};

/// Full normalization chain: outlier filter, atmospheric referencing, tube
/// compensation, synchronization, aggregation, then the alpha frame
/// transform on the MEMS aggregates.
ProcessResult process_campaign(const std::vector<SimulatedRun>& runs,
                               const ProcessOptions& options = {});

/// Groups processed aggregates into per-(state, system) sweep summaries.
std::vector<SweepSummary> build_summaries(const std::vector<AggregateRow>& rows);

struct AnalysisOptions {
  SeparationMethod separation;
  double pairing_distance = 0.05;  // chord
  double linear_window_min = -10.0;
  double linear_window_max = 8.0;
};

struct AnalysisOutputs {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> notes;
};

/// Emits plot-ready suction curves, chordwise profiles, separation estimates,
/// comparison and impact reports plus a provenance JSON.
AnalysisOutputs analyze_aggregates(const std::vector<AggregateRow>& rows,
                                   const std::filesystem::path& out_dir,
                                   const AnalysisOptions& options = {});

/// Nearest-tap comparison of two aggregates tables (Table-II style report).
ComparisonReport compare_aggregates(const std::vector<AggregateRow>& mems_rows,
                                    const std::vector<AggregateRow>& scanner_rows,
                                    double pairing_distance = 0.05);

}  // namespace windtap
