#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lsdnet/optimizer.hpp"

namespace lsdnet {

struct MinSensorsConfig {
    double r_a = 0.0;                         // adjacency radius; must exceed sqrt(2) r_s
    TrainingConfig inner;                     // per-pass placement training
    std::optional<std::size_t> initial_count; // defaults to the bounding-box tile count
};

// Seed deployment for the acquisition loop: one sensor at the center of each
// sqrt(2)*r_s tile of the bounding box (row-major, centers clamped into the
// box when the last tile overhangs). The count equals the tile bound that
// k_mbr_min computes, which makes this field the natural starting solution.
SensorField partition_seed(const Mbr& bounds, double r_s);

// Indices of the sensors within r_a of sensor k (k itself excluded).
std::vector<int> neighbor_set(std::size_t k, const SensorField& field, double r_a);

// Field without sensor k. Throws LastSensor on a one-sensor field.
SensorField remove_sensor(SensorField field, std::size_t k);

struct RemovalEvent {
    int pass = 0;                // 1-based outer pass
    int removed_sensor_id = 0;   // index within the field at removal time
    std::size_t remaining_k = 0;
};

struct MinSensorsResult {
    SensorField field;
    std::vector<RemovalEvent> removals;
    std::vector<LossBreakdown> final_history;  // training history of the last pass
    int passes = 0;
    long total_epochs = 0;  // training epochs summed over all passes
};

// Alternates placement training with greedy redundancy elimination: after each
// training pass, repeatedly drop the sensor with the most neighbors inside r_a
// (ties to the lowest index) until no neighbor set is nonempty; stops when a
// pass removes nothing. The returned field has pairwise distances above r_a.
MinSensorsResult acquire_minimum(const SensorField& initial, const TargetGrid& grid,
                                 const EvidentialSensingParams& params,
                                 const DetectionThresholds& thresholds,
                                 const MinSensorsConfig& config);

}  // namespace lsdnet
