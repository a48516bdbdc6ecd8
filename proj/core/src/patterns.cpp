#include "lsdnet/patterns.hpp"

#include <cmath>

#include "lsdnet/errors.hpp"
#include "lsdnet/io.hpp"
#include "lsdnet/rng.hpp"

namespace lsdnet {

const char* pattern_kind_name(PatternKind kind) {
    switch (kind) {
        case PatternKind::kRandom: return "random";
        case PatternKind::kCentroid: return "centroid";
        case PatternKind::kBoundary: return "boundary";
        case PatternKind::kGaussian: return "gaussian";
        case PatternKind::kLogistic: return "logistic";
        case PatternKind::kUniform: return "uniform";
        case PatternKind::kExponential: return "exponential";
        case PatternKind::kFile: return "file";
    }
    return "unknown";
}

PatternKind pattern_kind_from_name(const std::string& name) {
    if (name == "random") return PatternKind::kRandom;
    if (name == "centroid") return PatternKind::kCentroid;
    if (name == "boundary") return PatternKind::kBoundary;
    if (name == "gaussian") return PatternKind::kGaussian;
    if (name == "logistic") return PatternKind::kLogistic;
    if (name == "uniform") return PatternKind::kUniform;
    if (name == "exponential") return PatternKind::kExponential;
    if (name == "file") return PatternKind::kFile;
    throw ConfigError("unknown pattern kind: '" + name + "'");
}

namespace {

double require(const std::optional<double>& value, const char* kind, const char* name) {
    if (!value) {
        throw MissingParam(std::string(kind) + " pattern needs parameter '" + name + "'");
    }
    return *value;
}

// Point at arc length t along the bounding rectangle's perimeter, walking
// counter-clockwise from the lower-left corner.
Point perimeter_point(const Mbr& box, double t) {
    const double ex = box.extent_x;
    const double ey = box.extent_y;
    if (t < ex) return Point{box.anchor.x + t, box.anchor.y};
    t -= ex;
    if (t < ey) return Point{box.anchor.x + ex, box.anchor.y + t};
    t -= ey;
    if (t < ex) return Point{box.anchor.x + ex - t, box.anchor.y + ey};
    t -= ex;
    return Point{box.anchor.x, box.anchor.y + ey - t};
}

}  // namespace

SensorField generate(const PatternSpec& spec, std::size_t k, const Region& region) {
    if (spec.kind == PatternKind::kFile) {
        if (spec.path.empty()) {
            throw MissingParam("file pattern needs parameter 'path'");
        }
        return read_sensor_csv(spec.path);
    }

    const Mbr box = region.mbr();
    CounterRng rng(spec.seed);
    SensorField field;
    field.coords.reserve(k);

    switch (spec.kind) {
        case PatternKind::kRandom: {
            for (std::size_t i = 0; i < k; ++i) {
                const double x = rng.uniform(box.anchor.x, box.anchor.x + box.extent_x);
                const double y = rng.uniform(box.anchor.y, box.anchor.y + box.extent_y);
                field.coords.push_back(Point{x, y});
            }
            break;
        }
        case PatternKind::kCentroid: {
            if (spec.jitter < 0.0) {
                throw ConfigError("centroid jitter must be nonnegative");
            }
            const Point c = region.centroid();
            for (std::size_t i = 0; i < k; ++i) {
                const double x = c.x + rng.uniform(-spec.jitter, spec.jitter);
                const double y = c.y + rng.uniform(-spec.jitter, spec.jitter);
                field.coords.push_back(box.clamp(Point{x, y}));
            }
            break;
        }
        case PatternKind::kBoundary: {
            for (std::size_t i = 0; i < k; ++i) {
                const double t = rng.uniform(0.0, box.perimeter());
                field.coords.push_back(perimeter_point(box, t));
            }
            break;
        }
        case PatternKind::kGaussian: {
            const double mu = require(spec.mu, "gaussian", "mu");
            const double sigma = require(spec.sigma_g, "gaussian", "sigma_g");
            if (!(sigma > 0.0)) throw ConfigError("gaussian sigma_g must be positive");
            for (std::size_t i = 0; i < k; ++i) {
                const double x = rng.gaussian(mu, sigma);
                const double y = rng.gaussian(mu, sigma);
                field.coords.push_back(box.clamp(Point{x, y}));
            }
            break;
        }
        case PatternKind::kLogistic: {
            const double mu = require(spec.mu, "logistic", "mu");
            const double s = require(spec.sigma_l, "logistic", "sigma_l");
            if (!(s > 0.0)) throw ConfigError("logistic sigma_l must be positive");
            for (std::size_t i = 0; i < k; ++i) {
                const double x = rng.logistic(mu, s);
                const double y = rng.logistic(mu, s);
                field.coords.push_back(box.clamp(Point{x, y}));
            }
            break;
        }
        case PatternKind::kUniform: {
            const double a = require(spec.a, "uniform", "a");
            const double b = require(spec.b, "uniform", "b");
            if (!(b > a)) throw ConfigError("uniform pattern needs b > a");
            for (std::size_t i = 0; i < k; ++i) {
                const double x = rng.uniform(a, b);
                const double y = rng.uniform(a, b);
                field.coords.push_back(box.clamp(Point{x, y}));
            }
            break;
        }
        case PatternKind::kExponential: {
            const double rate = require(spec.rate, "exponential", "rate");
            if (!(rate > 0.0)) throw ConfigError("exponential rate must be positive");
            for (std::size_t i = 0; i < k; ++i) {
                const double x = box.anchor.x + rng.exponential(rate);
                const double y = box.anchor.y + rng.exponential(rate);
                field.coords.push_back(box.clamp(Point{x, y}));
            }
            break;
        }
        case PatternKind::kFile:
            break;  // handled above
    }
    return field;
}

}  // namespace lsdnet
