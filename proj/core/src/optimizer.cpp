#include "lsdnet/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lsdnet/errors.hpp"

namespace lsdnet {

namespace {

constexpr double kDistanceGuard = 1e-12;

double evidential_q(double d, const EvidentialSensingParams& params) {
    if (d < params.r_s) return 1.0;
    const double u = d - params.r_s;
    const double t = params.beta == 1.0 ? u : std::pow(u, params.beta);
    return std::exp(-params.lambda * t);
}

// dq/dd for the exponential tail; zero on the plateau and at the knee.
double evidential_dq_dd(double d, double q, const EvidentialSensingParams& params) {
    if (d <= params.r_s) return 0.0;
    const double u = d - params.r_s;
    const double shape = params.beta == 1.0 ? 1.0 : params.beta * std::pow(u, params.beta - 1.0);
    return -params.lambda * shape * q;
}

struct GateDecision {
    int closest = -1;
    double d1 = 0.0;       // distance to the closest sensor
    bool full = false;     // true when the whole field fuses
    double q1 = 0.0;
};

// Rank-one sensor plus the gate outcome. The rank-k efficiency
// 1 - sqrt(1 - fused_k) is nondecreasing in k, so the gate either closes at
// rank two or admits every sensor; deciding it needs only the two nearest.
GateDecision decide_gate(const Point& target, const std::vector<Point>& sensors,
                         const EvidentialSensingParams& params,
                         const DetectionThresholds& thresholds) {
    double best1 = std::numeric_limits<double>::infinity();
    double best2 = std::numeric_limits<double>::infinity();
    int idx1 = -1;
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const double dx = sensors[i].x - target.x;
        const double dy = sensors[i].y - target.y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best1) {
            best2 = best1;
            best1 = d2;
            idx1 = static_cast<int>(i);
        } else if (d2 < best2) {
            best2 = d2;
        }
    }
    GateDecision out;
    out.closest = idx1;
    out.d1 = std::sqrt(best1);
    out.q1 = evidential_q(out.d1, params);
    if (sensors.size() < 2) {
        out.full = sensors.size() == 1;  // a lone sensor is the whole field
        return out;
    }
    const double q2 = evidential_q(std::sqrt(best2), params);
    SimpleFusion running;
    running.fuse(out.q1);
    out.full = running.efficiency_of(q2) >= thresholds.eta_th;
    return out;
}

// prod(1 - q_i) over the whole field in index order.
double full_fusion_theta(const Point& target, const std::vector<Point>& sensors,
                         const EvidentialSensingParams& params) {
    double theta = 1.0;
    for (const Point& s : sensors) {
        const double dx = s.x - target.x;
        const double dy = s.y - target.y;
        theta *= 1.0 - evidential_q(std::sqrt(dx * dx + dy * dy), params);
    }
    return theta;
}

void check_structure(const FrozenStructure& frozen, const SensorField& field,
                     const TargetGrid& grid) {
    if (frozen.field_size != field.size() || frozen.closest.size() != grid.n_targets ||
        frozen.full_fusion.size() != grid.n_targets) {
        throw StaleStructure("frozen fusion structure does not match this field/grid");
    }
}

void finalize_importance(NodeImportance& importance, double full_share_total) {
    double sum = 0.0;
    for (double& r : importance.raw) {
        r += full_share_total;
        sum += r;
    }
    importance.normalized.assign(importance.raw.size(), 0.0);
    if (sum > 0.0) {
        for (std::size_t i = 0; i < importance.raw.size(); ++i) {
            importance.normalized[i] = importance.raw[i] / sum;
        }
    }
}

}  // namespace

SensorField filter(SensorField field, const Mbr& bounds) {
    for (Point& p : field.coords) p = bounds.clamp(p);
    return field;
}

SensorField filter(SensorField field, const Region& region) {
    return filter(std::move(field), region.mbr());
}

ForwardResult forward(const SensorField& field, const TargetGrid& grid,
                      const EvidentialSensingParams& params,
                      const DetectionThresholds& thresholds) {
    if (field.empty()) {
        throw EmptyField("forward: no sensors in the field");
    }
    const std::size_t k = field.size();
    ForwardResult out;
    out.report.fused_probability.reserve(grid.n_targets);
    out.report.n_effect.reserve(grid.n_targets);
    out.report.detected.reserve(grid.n_targets);
    out.frozen.field_size = k;
    out.frozen.closest.reserve(grid.n_targets);
    out.frozen.full_fusion.reserve(grid.n_targets);
    out.importance.raw.assign(k, 0.0);
    double full_share_total = 0.0;  // every sensor shares in each full fusion

    for (std::size_t idx = 0; idx < grid.points.size(); ++idx) {
        if (!grid.mask[idx]) continue;
        const Point& target = grid.points[idx];
        const GateDecision gate = decide_gate(target, field.coords, params, thresholds);
        double fused;
        int n_effect;
        if (gate.full) {
            fused = 1.0 - full_fusion_theta(target, field.coords, params);
            n_effect = static_cast<int>(k);
            full_share_total += fused / static_cast<double>(k);
        } else {
            fused = gate.q1;
            n_effect = 1;
            out.importance.raw[gate.closest] += fused;
        }
        out.report.fused_probability.push_back(fused);
        out.report.n_effect.push_back(n_effect);
        out.report.detected.push_back(fused >= thresholds.p_th ? 1 : 0);
        out.frozen.closest.push_back(gate.closest);
        out.frozen.full_fusion.push_back(gate.full ? 1 : 0);
    }
    finalize_importance(out.importance, full_share_total);
    return out;
}

double loss_ni(const NodeImportance& importance) {
    const std::size_t k = importance.normalized.size();
    if (k == 0) return 0.0;
    const double share = 1.0 / static_cast<double>(k);
    double sum = 0.0;
    for (double ni : importance.normalized) {
        const double dev = ni - share;
        sum += dev * dev;
    }
    return sum / static_cast<double>(k);
}

double loss_cov(const DetectionReport& report) {
    if (report.size() == 0) return 0.0;
    double sum = 0.0;
    for (double p : report.fused_probability) {
        const double dev = p - 1.0;
        sum += dev * dev;
    }
    return sum / static_cast<double>(report.size());
}

LossBreakdown make_loss_breakdown(const DetectionReport& report,
                                  const NodeImportance& importance,
                                  const TrainingConfig& config) {
    LossBreakdown lb;
    lb.loss_ni = loss_ni(importance);
    lb.loss_cov = loss_cov(report);
    lb.total = config.gamma_n * lb.loss_ni + config.gamma_c * lb.loss_cov;
    std::size_t hits = 0;
    for (std::uint8_t d : report.detected) hits += d;
    lb.coverage_rate = report.size() == 0
                           ? 0.0
                           : static_cast<double>(hits) / static_cast<double>(report.size());
    return lb;
}

LossBreakdown frozen_loss(const SensorField& field, const TargetGrid& grid,
                          const FrozenStructure& frozen, const TrainingConfig& config,
                          const EvidentialSensingParams& params,
                          const DetectionThresholds& thresholds) {
    check_structure(frozen, field, grid);
    const std::size_t k = field.size();
    DetectionReport report;
    report.fused_probability.reserve(grid.n_targets);
    report.detected.reserve(grid.n_targets);
    NodeImportance importance;
    importance.raw.assign(k, 0.0);
    double full_share_total = 0.0;

    std::size_t j = 0;
    for (std::size_t idx = 0; idx < grid.points.size(); ++idx) {
        if (!grid.mask[idx]) continue;
        const Point& target = grid.points[idx];
        double fused;
        if (frozen.full_fusion[j]) {
            fused = 1.0 - full_fusion_theta(target, field.coords, params);
            full_share_total += fused / static_cast<double>(k);
        } else {
            const int i = frozen.closest[j];
            fused = evidential_q(distance(field.coords[i], target), params);
            importance.raw[i] += fused;
        }
        report.fused_probability.push_back(fused);
        report.detected.push_back(fused >= thresholds.p_th ? 1 : 0);
        ++j;
    }
    finalize_importance(importance, full_share_total);
    return make_loss_breakdown(report, importance, config);
}

namespace {

// Shared second pass: from per-target fused masses and the importance-loss
// chain terms, push derivatives through the fused-probability products, the
// detection law, and the distance, accumulating in target-index order.
std::vector<double> gradient_pass2(const SensorField& field, const TargetGrid& grid,
                                   const FrozenStructure& frozen,
                                   const std::vector<double>& fused,
                                   const NodeImportance& importance,
                                   const TrainingConfig& config,
                                   const EvidentialSensingParams& params) {
    const std::size_t k = field.size();
    const double n = static_cast<double>(grid.n_targets);

    // d(loss_ni)/d(raw importance) via the normalization quotient rule:
    // with shares ni = raw/S, the derivative w.r.t. raw_r is
    // (c_r - sum_k c_k ni_k)/S where c_k = (2/K)(ni_k - 1/K).
    std::vector<double> d_loss_d_raw(k, 0.0);
    double d_loss_d_raw_sum = 0.0;
    double raw_sum = 0.0;
    for (double r : importance.raw) raw_sum += r;
    if (raw_sum > 0.0) {
        const double share = 1.0 / static_cast<double>(k);
        double alpha = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double c = 2.0 * share * (importance.normalized[i] - share);
            alpha += c * importance.normalized[i];
            d_loss_d_raw[i] = c;  // finished below
        }
        for (std::size_t i = 0; i < k; ++i) {
            d_loss_d_raw[i] = (d_loss_d_raw[i] - alpha) / raw_sum;
            d_loss_d_raw_sum += d_loss_d_raw[i];
        }
    }

    std::vector<double> grad(2 * k, 0.0);
    std::vector<double> s_buf(k), d_buf(k), suffix(k + 1);

    auto push_through_distance = [&](int i, const Point& target, double d, double q,
                                     double dL_dq) {
        const double dq_dd = evidential_dq_dd(d, q, params);
        if (dq_dd == 0.0 || d < kDistanceGuard) return;
        const double g = dL_dq * dq_dd / d;
        grad[2 * static_cast<std::size_t>(i)] += g * (field.coords[i].x - target.x);
        grad[2 * static_cast<std::size_t>(i) + 1] += g * (field.coords[i].y - target.y);
    };

    std::size_t j = 0;
    for (std::size_t idx = 0; idx < grid.points.size(); ++idx) {
        if (!grid.mask[idx]) continue;
        const Point& target = grid.points[idx];
        const double p = fused[j];
        const double d_cov_dp = config.gamma_c * (2.0 / n) * (p - 1.0);
        if (frozen.full_fusion[j]) {
            // All K sensors fuse: dP/dq_i is the product of the other
            // survival terms, built from prefix/suffix partial products.
            const double d_ni_dp =
                config.gamma_n * d_loss_d_raw_sum / static_cast<double>(k);
            const double dL_dp = d_ni_dp + d_cov_dp;
            for (std::size_t i = 0; i < k; ++i) {
                const double d = distance(field.coords[i], target);
                d_buf[i] = d;
                s_buf[i] = 1.0 - evidential_q(d, params);
            }
            suffix[k] = 1.0;
            for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] * s_buf[i];
            double prefix = 1.0;
            for (std::size_t i = 0; i < k; ++i) {
                const double dp_dq = prefix * suffix[i + 1];
                const double q = 1.0 - s_buf[i];
                push_through_distance(static_cast<int>(i), target, d_buf[i], q,
                                      dL_dp * dp_dq);
                prefix *= s_buf[i];
            }
        } else {
            const int i = frozen.closest[j];
            const double dL_dp =
                config.gamma_n * d_loss_d_raw[static_cast<std::size_t>(i)] + d_cov_dp;
            const double d = distance(field.coords[i], target);
            push_through_distance(i, target, d, p, dL_dp);
        }
        ++j;
    }
    return grad;
}

}  // namespace

std::vector<double> gradient(const SensorField& field, const TargetGrid& grid,
                             const FrozenStructure& frozen, const TrainingConfig& config,
                             const EvidentialSensingParams& params,
                             const DetectionThresholds& thresholds) {
    check_structure(frozen, field, grid);
    const std::size_t k = field.size();

    // First pass: fused masses and raw importance at the current coordinates,
    // mirroring frozen_loss exactly.
    std::vector<double> fused;
    fused.reserve(grid.n_targets);
    NodeImportance importance;
    importance.raw.assign(k, 0.0);
    double full_share_total = 0.0;
    std::size_t j = 0;
    for (std::size_t idx = 0; idx < grid.points.size(); ++idx) {
        if (!grid.mask[idx]) continue;
        const Point& target = grid.points[idx];
        double p;
        if (frozen.full_fusion[j]) {
            p = 1.0 - full_fusion_theta(target, field.coords, params);
            full_share_total += p / static_cast<double>(k);
        } else {
            const int i = frozen.closest[j];
            p = evidential_q(distance(field.coords[i], target), params);
            importance.raw[i] += p;
        }
        fused.push_back(p);
        ++j;
    }
    finalize_importance(importance, full_share_total);
    (void)thresholds;  // detection thresholds shape the skeleton, not the loss
    return gradient_pass2(field, grid, frozen, fused, importance, config, params);
}

std::vector<double> gradient(const SensorField& field, const TargetGrid& grid,
                             const FrozenStructure& frozen, const DetectionReport& report,
                             const NodeImportance& importance, const TrainingConfig& config,
                             const EvidentialSensingParams& params) {
    check_structure(frozen, field, grid);
    return gradient_pass2(field, grid, frozen, report.fused_probability, importance,
                          config, params);
}

SensorField adam_step(SensorField field, const std::vector<double>& grad,
                      OptimizerState& state, const TrainingConfig& config) {
    const std::size_t n = 2 * field.size();
    if (grad.size() != n) {
        throw StaleStructure("adam_step: gradient length does not match the field");
    }
    if (state.first_moment.empty()) {
        state.first_moment.assign(n, 0.0);
        state.second_moment.assign(n, 0.0);
    }
    if (state.first_moment.size() != n || state.second_moment.size() != n) {
        throw StaleStructure("adam_step: optimizer state does not match the field");
    }
    ++state.step_count;
    const double b1 = config.adam_beta1;
    const double b2 = config.adam_beta2;
    const double bias1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
    const double bias2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
    for (std::size_t i = 0; i < n; ++i) {
        double& m = state.first_moment[i];
        double& v = state.second_moment[i];
        m = b1 * m + (1.0 - b1) * grad[i];
        v = b2 * v + (1.0 - b2) * grad[i] * grad[i];
        const double m_hat = m / bias1;
        const double v_hat = v / bias2;
        const double delta =
            config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_epsilon);
        double& coord = (i % 2 == 0) ? field.coords[i / 2].x : field.coords[i / 2].y;
        coord -= delta;
    }
    return field;
}

TrainResult train(SensorField initial, const TargetGrid& grid,
                  const EvidentialSensingParams& params,
                  const DetectionThresholds& thresholds, const TrainingConfig& config) {
    if (initial.empty()) {
        throw EmptyField("train: no sensors in the field");
    }
    const long epochs = std::max<long>(1, config.max_epochs);
    TrainResult result;
    result.field = filter(std::move(initial), grid.bounds);
    OptimizerState state;
    double best = std::numeric_limits<double>::infinity();
    long stall = 0;
    for (long epoch = 1; epoch <= epochs; ++epoch) {
        ForwardResult fw = forward(result.field, grid, params, thresholds);
        const LossBreakdown lb = make_loss_breakdown(fw.report, fw.importance, config);
        result.history.push_back(lb);
        const double delta = config.early_stop_delta
                                 ? *config.early_stop_delta
                                 : 1e-8 * result.history.front().total;
        if (lb.total < best - delta) {
            best = lb.total;
            stall = 0;
        } else {
            ++stall;
        }
        if (config.early_stop_patience > 0 && stall >= config.early_stop_patience) break;
        if (epoch == epochs) break;
        const std::vector<double> grad =
            gradient(result.field, grid, fw.frozen, fw.report, fw.importance, config, params);
        result.field = filter(adam_step(std::move(result.field), grad, state, config),
                              grid.bounds);
    }
    return result;
}

}  // namespace lsdnet
