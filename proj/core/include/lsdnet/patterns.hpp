#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lsdnet/geometry.hpp"

namespace lsdnet {

enum class PatternKind {
    kRandom,      // uniform over the bounding rectangle
    kCentroid,    // region centroid plus per-axis uniform jitter
    kBoundary,    // arc-length uniform on the bounding rectangle's perimeter
    kGaussian,    // per-axis normal(mu, sigma_g)
    kLogistic,    // per-axis logistic(mu, sigma_l)
    kUniform,     // per-axis uniform[a, b]
    kExponential, // per-axis exponential(rate), decaying from the origin corner
    kFile,        // coordinates read verbatim from a CSV file
};

struct PatternSpec {
    PatternKind kind = PatternKind::kRandom;
    std::optional<double> mu;
    std::optional<double> sigma_g;
    std::optional<double> sigma_l;
    std::optional<double> a;
    std::optional<double> b;
    std::optional<double> rate;
    double jitter = 2.0;
    std::uint64_t seed = 0;
    std::string path;  // kFile only
};

const char* pattern_kind_name(PatternKind kind);
PatternKind pattern_kind_from_name(const std::string& name);  // throws ConfigError

// Draws k sensor positions. Sampled kinds clamp out-of-bounds draws to the
// bounding rectangle; kFile reads coordinates verbatim (no clamping) and
// ignores k in favor of the file's row count. Throws MissingParam when the
// kind needs a parameter that is absent, BadFile on unreadable input.
SensorField generate(const PatternSpec& spec, std::size_t k, const Region& region);

}  // namespace lsdnet
