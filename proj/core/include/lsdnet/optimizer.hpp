#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lsdnet/sensing.hpp"

namespace lsdnet {

struct TrainingConfig {
    double gamma_n = 3e5;         // weight of the importance-balance loss
    double gamma_c = 1e3;         // weight of the coverage loss
    double learning_rate = 3e-2;
    long max_epochs = 1000;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    long early_stop_patience = 50;
    // Minimum total-loss improvement that resets the patience counter.
    // Unset means 1e-8 times the initial total loss.
    std::optional<double> early_stop_delta;
};

// Adam accumulators over the flattened 2K coordinate vector.
struct OptimizerState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    long step_count = 0;
};

// Per-target fusion outcomes over the masked-in grid points, in grid order.
struct DetectionReport {
    std::vector<double> fused_probability;
    std::vector<int> n_effect;
    std::vector<std::uint8_t> detected;

    std::size_t size() const { return fused_probability.size(); }
};

// Per-sensor share of fused detection mass. normalized sums to 1 whenever
// the raw sum is positive.
struct NodeImportance {
    std::vector<double> raw;
    std::vector<double> normalized;
};

// Fusion skeleton captured at evaluation time and held fixed while
// differentiating: which sensors fuse for each target. The efficiency gate
// either stops at rank one or admits the whole field, so per target it is
// enough to record the closest sensor and whether everyone fuses.
struct FrozenStructure {
    std::size_t field_size = 0;
    std::vector<std::int32_t> closest;       // per target: the rank-one sensor
    std::vector<std::uint8_t> full_fusion;   // per target: 1 if all sensors fuse
};

struct LossBreakdown {
    double loss_ni = 0.0;
    double loss_cov = 0.0;
    double total = 0.0;          // gamma_n * loss_ni + gamma_c * loss_cov
    double coverage_rate = 0.0;  // detected targets / all targets
};

struct ForwardResult {
    DetectionReport report;
    NodeImportance importance;
    FrozenStructure frozen;
};

// Clamps every sensor into the bounding rectangle.
SensorField filter(SensorField field, const Mbr& bounds);
SensorField filter(SensorField field, const Region& region);

// Fuses evidence for every masked-in target and accumulates per-sensor
// importance. Equivalent to collaborative_detect per target, via a fast path
// that skips the per-target sort. Throws EmptyField on a sensorless field.
ForwardResult forward(const SensorField& field, const TargetGrid& grid,
                      const EvidentialSensingParams& params,
                      const DetectionThresholds& thresholds);

// Mean squared deviation of normalized importance from the uniform share 1/K.
double loss_ni(const NodeImportance& importance);

// Mean squared deviation of fused detection mass from certainty.
double loss_cov(const DetectionReport& report);

LossBreakdown make_loss_breakdown(const DetectionReport& report,
                                  const NodeImportance& importance,
                                  const TrainingConfig& config);

// Total loss re-evaluated at the given coordinates while keeping the fusion
// skeleton fixed. This is the function the analytic gradient differentiates.
LossBreakdown frozen_loss(const SensorField& field, const TargetGrid& grid,
                          const FrozenStructure& frozen, const TrainingConfig& config,
                          const EvidentialSensingParams& params,
                          const DetectionThresholds& thresholds);

// Analytic gradient of gamma_n * loss_ni + gamma_c * loss_cov with respect to
// the flattened coordinates, at fixed fusion skeleton. Distance terms are
// guarded at d < 1e-12 and the detection law's plateau (d <= r_s) contributes
// zero. Throws StaleStructure when the skeleton does not match field/grid.
std::vector<double> gradient(const SensorField& field, const TargetGrid& grid,
                             const FrozenStructure& frozen, const TrainingConfig& config,
                             const EvidentialSensingParams& params,
                             const DetectionThresholds& thresholds);

// Same gradient, reusing fused masses and importance already computed by
// forward at these exact coordinates (saves the re-evaluation pass).
std::vector<double> gradient(const SensorField& field, const TargetGrid& grid,
                             const FrozenStructure& frozen, const DetectionReport& report,
                             const NodeImportance& importance, const TrainingConfig& config,
                             const EvidentialSensingParams& params);

// One bias-corrected Adam update over the flattened coordinates.
SensorField adam_step(SensorField field, const std::vector<double>& grad,
                      OptimizerState& state, const TrainingConfig& config);

struct TrainResult {
    SensorField field;
    std::vector<LossBreakdown> history;  // one entry per evaluated epoch
};

// Gradient-descent placement loop. Each epoch clamps, evaluates (one history
// entry), then steps — except the terminal epoch, which only evaluates, so
// the returned field is exactly the one the last history entry describes.
// Stops after max_epochs epochs or once the total loss has failed to improve
// by early_stop_delta for early_stop_patience consecutive epochs.
TrainResult train(SensorField initial, const TargetGrid& grid,
                  const EvidentialSensingParams& params,
                  const DetectionThresholds& thresholds, const TrainingConfig& config);

}  // namespace lsdnet
