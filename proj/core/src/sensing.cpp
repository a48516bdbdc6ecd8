#include "lsdnet/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "lsdnet/errors.hpp"

namespace lsdnet {

double detect_prob_boolean(double d, double r_s) {
    return d <= r_s ? 1.0 : 0.0;
}

double detect_prob_probabilistic(double d, const ProbabilisticSensingParams& params) {
    const double inner = params.r_s - params.r_e;
    const double outer = params.r_s + params.r_e;
    if (d < inner) return 1.0;
    if (d >= outer) return 0.0;
    const double lambda1 = params.r_e - (params.r_s - d);
    const double lambda2 = params.r_e + (params.r_s - d);
    return std::exp(-params.alpha1 * std::pow(lambda1, params.beta1) /
                        std::pow(lambda2, params.beta2) +
                    params.alpha2);
}

double detect_prob_evidential(double d, const EvidentialSensingParams& params) {
    if (d < params.r_s) return 1.0;
    const double u = d - params.r_s;
    const double t = params.beta == 1.0 ? u : std::pow(u, params.beta);
    return std::exp(-params.lambda * t);
}

MassFunction mass_from_prob(double p) {
    return MassFunction{p, 0.0, 1.0 - p};
}

TargetDetection collaborative_detect(const Point& target, const SensorField& sensors,
                                     const EvidentialSensingParams& params,
                                     const DetectionThresholds& thresholds) {
    if (sensors.empty()) {
        throw EmptyField("collaborative_detect: no sensors in the field");
    }
    const std::size_t k = sensors.size();
    std::vector<std::pair<double, int>> order(k);
    for (std::size_t i = 0; i < k; ++i) {
        order[i] = {distance(sensors.coords[i], target), static_cast<int>(i)};
    }
    std::sort(order.begin(), order.end());

    SimpleFusion fusion;
    TargetDetection out;
    fusion.fuse(detect_prob_evidential(order[0].first, params));
    out.effective_ranks.push_back(order[0].second);
    for (std::size_t rank = 1; rank < k; ++rank) {
        const double q = detect_prob_evidential(order[rank].first, params);
        if (fusion.efficiency_of(q) < thresholds.eta_th) break;
        fusion.fuse(q);
        out.effective_ranks.push_back(order[rank].second);
    }
    out.n_effect = fusion.count();
    out.fused_probability = fusion.fused_prob();
    out.detected = out.fused_probability >= thresholds.p_th;
    return out;
}

}  // namespace lsdnet
