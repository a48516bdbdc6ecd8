#include "lsdnet/min_sensors.hpp"

#include <cmath>
#include <stdexcept>

#include "lsdnet/errors.hpp"

namespace lsdnet {

SensorField partition_seed(const Mbr& bounds, double r_s) {
    if (!(r_s > 0.0)) {
        throw std::invalid_argument("partition_seed: r_s must be positive");
    }
    const double spacing = std::sqrt(2.0) * r_s;
    const auto tiles = [&](double extent) {
        return static_cast<std::size_t>(std::ceil(extent / spacing));
    };
    const std::size_t cols = tiles(bounds.extent_x);
    const std::size_t rows = tiles(bounds.extent_y);
    SensorField field;
    field.coords.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const Point center{bounds.anchor.x + spacing * (0.5 + static_cast<double>(c)),
                               bounds.anchor.y + spacing * (0.5 + static_cast<double>(r))};
            field.coords.push_back(bounds.clamp(center));
        }
    }
    return field;
}

std::vector<int> neighbor_set(std::size_t k, const SensorField& field, double r_a) {
    if (k >= field.size()) {
        throw std::out_of_range("neighbor_set: sensor index out of range");
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (i == k) continue;
        if (distance(field.coords[i], field.coords[k]) <= r_a) {
            out.push_back(static_cast<int>(i));
        }
    }
    return out;
}

SensorField remove_sensor(SensorField field, std::size_t k) {
    if (k >= field.size()) {
        throw std::out_of_range("remove_sensor: sensor index out of range");
    }
    if (field.size() == 1) {
        throw LastSensor("remove_sensor: cannot remove the only sensor");
    }
    field.coords.erase(field.coords.begin() + static_cast<std::ptrdiff_t>(k));
    return field;
}

namespace {

// Neighbor counts for every sensor in one O(K^2) sweep.
std::vector<int> neighbor_counts(const SensorField& field, double r_a) {
    std::vector<int> counts(field.size(), 0);
    for (std::size_t i = 0; i < field.size(); ++i) {
        for (std::size_t j = i + 1; j < field.size(); ++j) {
            if (distance(field.coords[i], field.coords[j]) <= r_a) {
                ++counts[i];
                ++counts[j];
            }
        }
    }
    return counts;
}

}  // namespace

MinSensorsResult acquire_minimum(const SensorField& initial, const TargetGrid& grid,
                                 const EvidentialSensingParams& params,
                                 const DetectionThresholds& thresholds,
                                 const MinSensorsConfig& config) {
    if (initial.empty()) {
        throw EmptyField("acquire_minimum: no sensors in the field");
    }
    if (!(config.r_a > std::sqrt(2.0) * params.r_s)) {
        throw ConfigError("acquire_minimum: adjacency radius must exceed sqrt(2) * r_s");
    }
    MinSensorsResult result;
    result.field = initial;
    for (;;) {
        ++result.passes;
        TrainResult trained =
            train(std::move(result.field), grid, params, thresholds, config.inner);
        result.field = std::move(trained.field);
        result.total_epochs += static_cast<long>(trained.history.size());
        result.final_history = std::move(trained.history);

        int removed_this_pass = 0;
        for (;;) {
            const std::vector<int> counts = neighbor_counts(result.field, config.r_a);
            int best = 0;
            int best_count = 0;
            for (std::size_t i = 0; i < counts.size(); ++i) {
                if (counts[i] > best_count) {  // ties keep the lowest index
                    best_count = counts[i];
                    best = static_cast<int>(i);
                }
            }
            if (best_count == 0) break;
            result.field = remove_sensor(std::move(result.field), static_cast<std::size_t>(best));
            ++removed_this_pass;
            result.removals.push_back(
                RemovalEvent{result.passes, best, result.field.size()});
        }
        if (removed_this_pass == 0) break;
    }
    return result;
}

}  // namespace lsdnet
