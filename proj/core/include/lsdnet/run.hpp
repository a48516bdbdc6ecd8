#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsdnet/min_sensors.hpp"
#include "lsdnet/patterns.hpp"

namespace lsdnet {

inline constexpr const char* kToolVersion = "1.0.0";

// One run's worth of settings, parsed from a flat key = value file.
struct RunConfig {
    std::optional<double> region_width;
    std::optional<double> region_height;
    std::string region_polygon_path;  // alternative to width/height
    double grid_spacing = 1.0;
    std::size_t sensor_count = 0;
    PatternSpec pattern;
    EvidentialSensingParams sensing;
    DetectionThresholds thresholds;
    TrainingConfig training;
    MinSensorsConfig min_sensors;  // r_a stays 0 until configured
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> echo;  // raw parsed keys
};

// Parses and validates a config file. Unknown keys, unparseable values, and
// inconsistent combinations raise ConfigError with path and key context.
RunConfig load_run_config(const std::filesystem::path& path);

// Region described by the config: rectangle extents, or a polygon outline
// file with one "x,y" vertex per line ('#' comments allowed).
Region region_from_config(const RunConfig& config);

struct CoverageReport {
    std::size_t n_detected = 0;
    std::size_t n_targets = 0;
    double rho = 0.0;  // n_detected / n_targets

    bool operator==(const CoverageReport&) const = default;
};

CoverageReport coverage_rate(const DetectionReport& report, const TargetGrid& grid);

struct RunSummary {
    CoverageReport coverage;
    std::size_t final_k = 0;
    double wall_time_seconds = 0.0;
    long epochs_executed = 0;
    LossBreakdown final_loss;
    std::string rng_algorithm;
    std::string tool_version;
    std::vector<std::pair<std::string, std::string>> config_echo;
};

bool operator==(const LossBreakdown& a, const LossBreakdown& b);
bool operator==(const RunSummary& a, const RunSummary& b);

std::string summary_to_json(const RunSummary& summary);
RunSummary summary_from_json(const std::string& text);

// Full pipeline: sample the pattern, train placement, and write sensors.csv,
// coverage_grid.csv, loss_history.csv, and summary.json to output_dir.
RunSummary run_deploy(const RunConfig& config);

// Single evaluation of coordinates read verbatim from a CSV; writes
// coverage_grid.csv and summary.json. Coordinates are never mutated.
RunSummary run_evaluate(const RunConfig& config, const std::filesystem::path& coords);

// Minimum-sensor acquisition; additionally writes removals.csv.
RunSummary run_minsensors(const RunConfig& config);

// Pattern sampling alone; writes the coordinates CSV to out_path.
RunSummary run_generate(const RunConfig& config, const std::filesystem::path& out_path);

}  // namespace lsdnet
