#pragma once

#include <vector>

#include "lsdnet/evidence.hpp"
#include "lsdnet/geometry.hpp"

namespace lsdnet {

// Exponential-tail detection law: certain inside r_s, exp(-lambda (d-r_s)^beta)
// beyond it. Continuous at d = r_s.
struct EvidentialSensingParams {
    double r_s = 4.0;
    double lambda = 0.07;
    double beta = 1.0;
};

// Annulus-interpolated law: certain inside r_s - r_e, impossible beyond
// r_s + r_e, exponential ramp in between.
struct ProbabilisticSensingParams {
    double r_s = 8.0;
    double r_e = 4.0;
    double alpha1 = 0.07;
    double alpha2 = 0.0;
    double beta1 = 1.0;
    double beta2 = 0.0;
};

struct DetectionThresholds {
    double p_th = 0.8;    // fused detection mass needed to call a target covered
    double eta_th = 0.2;  // fusion efficiency needed to keep absorbing sensors
};

double detect_prob_boolean(double d, double r_s);
double detect_prob_probabilistic(double d, const ProbabilisticSensingParams& params);
double detect_prob_evidential(double d, const EvidentialSensingParams& params);

// Simple-support mass induced by a detection probability: (p, 0, 1-p).
MassFunction mass_from_prob(double p);

// Outcome of fusing one target's evidence across the field.
struct TargetDetection {
    double fused_probability = 0.0;
    int n_effect = 0;
    std::vector<int> effective_ranks;  // fusing sensors, closest first
    bool detected = false;
};

// Ranks sensors by distance (ties by index), fuses their detection masses in
// order, and stops at the first rank whose fusion efficiency falls below
// eta_th. Throws EmptyField on a sensorless field.
TargetDetection collaborative_detect(const Point& target, const SensorField& sensors,
                                     const EvidentialSensingParams& params,
                                     const DetectionThresholds& thresholds);

}  // namespace lsdnet
