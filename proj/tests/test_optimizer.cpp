#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fd_check.hpp"
#include "lsdnet/errors.hpp"
#include "lsdnet/optimizer.hpp"
#include "lsdnet/rng.hpp"

using namespace lsdnet;
using namespace lsdnet::testsupport;

namespace {

TargetGrid two_point_grid() {
    TargetGrid g;
    g.points = {{2.0, 0.0}, {10.0, 0.0}};
    g.mask = {1, 1};
    g.n_targets = 2;
    g.bounds = Mbr{{0.0, 0.0}, 20.0, 1.0};
    g.nx = 2;
    g.ny = 1;
    return g;
}

SensorField random_field(CounterRng& rng, std::size_t k, double extent) {
    SensorField f;
    for (std::size_t i = 0; i < k; ++i)
        f.coords.push_back({rng.uniform(0.0, extent), rng.uniform(0.0, extent)});
    return f;
}

}  // namespace

TEST_CASE("filter clamps to the bounding rectangle") {
    SensorField f;
    f.coords = {{-3.0, 5.0}, {60.0, -1.0}, {10.0, 10.0}};
    const SensorField c = filter(f, Mbr{{0.0, 0.0}, 50.0, 20.0});
    CHECK(c.coords[0].x == 0.0);
    CHECK(c.coords[0].y == 5.0);
    CHECK(c.coords[1].x == 50.0);
    CHECK(c.coords[1].y == 0.0);
    CHECK(c.coords[2].x == 10.0);
    CHECK(c.coords[2].y == 10.0);

    const Region r = Region::rectangle(50.0, 20.0);
    const SensorField c2 = filter(f, r);
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(c2.coords[i].x == c.coords[i].x);
        CHECK(c2.coords[i].y == c.coords[i].y);
    }
}

TEST_CASE("forward matches the per-target reference on random fields") {
    CounterRng rng(2718);
    const EvidentialSensingParams params;  // r_s=4, lambda=0.07
    const DetectionThresholds th;
    const Region region = Region::rectangle(30.0, 30.0);
    const TargetGrid grid = discretize(region, 3.0);  // 121 targets

    for (int trial = 0; trial < 25; ++trial) {
        const SensorField field = random_field(rng, 1 + trial % 7, 30.0);
        const ForwardResult fr = forward(field, grid, params, th);
        REQUIRE(fr.report.size() == grid.n_targets);
        REQUIRE(fr.frozen.closest.size() == grid.n_targets);
        REQUIRE(fr.frozen.field_size == field.size());

        std::size_t t = 0;
        for (std::size_t i = 0; i < grid.points.size(); ++i) {
            if (!grid.mask[i]) continue;
            const TargetDetection ref =
                collaborative_detect(grid.points[i], field, params, th);
            CHECK(std::abs(fr.report.fused_probability[t] - ref.fused_probability) <= 1e-12);
            CHECK(fr.report.n_effect[t] == ref.n_effect);
            CHECK(static_cast<bool>(fr.report.detected[t]) == ref.detected);
            CHECK(fr.frozen.closest[t] == ref.effective_ranks.front());
            // The gate admits either the closest sensor alone or everyone.
            const bool full = ref.n_effect == static_cast<int>(field.size());
            CHECK(ref.n_effect == (full ? static_cast<int>(field.size()) : 1));
            CHECK(static_cast<bool>(fr.frozen.full_fusion[t]) == full);
            ++t;
        }
        CHECK(t == grid.n_targets);
    }
}

TEST_CASE("forward importance: hand-built two-sensor example") {
    const EvidentialSensingParams params;
    const DetectionThresholds th;
    SensorField field;
    field.coords = {{0.0, 0.0}, {20.0, 0.0}};
    const TargetGrid grid = two_point_grid();

    const ForwardResult fr = forward(field, grid, params, th);
    // Target (2,0): inside sensor 0's certain core -> solo, p = 1.
    CHECK(fr.report.fused_probability[0] == 1.0);
    CHECK(fr.report.n_effect[0] == 1);
    // Target (10,0): equidistant pair, q = exp(-0.42) each, full fusion.
    const double q = std::exp(-0.07 * 6.0);
    const double p_full = 1.0 - (1.0 - q) * (1.0 - q);
    CHECK(fr.report.fused_probability[1] == doctest::Approx(p_full).epsilon(1e-14));
    CHECK(fr.report.n_effect[1] == 2);
    CHECK(fr.frozen.closest[1] == 0);  // tie breaks to the lower index

    // Importance: sensor 0 takes the solo mass, both split the fused mass.
    CHECK(fr.importance.raw[0] == doctest::Approx(1.0 + p_full / 2.0).epsilon(1e-14));
    CHECK(fr.importance.raw[1] == doctest::Approx(p_full / 2.0).epsilon(1e-14));
    const double total = 1.0 + p_full;
    CHECK(fr.importance.normalized[0] ==
          doctest::Approx((1.0 + p_full / 2.0) / total).epsilon(1e-14));
    CHECK(fr.importance.normalized[0] + fr.importance.normalized[1] ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("forward importance: shares conserve fused mass on random fields") {
    CounterRng rng(5150);
    const EvidentialSensingParams params;
    const DetectionThresholds th;
    const TargetGrid grid = discretize(Region::rectangle(20.0, 20.0), 2.0);

    for (int trial = 0; trial < 20; ++trial) {
        const SensorField field = random_field(rng, 2 + trial % 5, 20.0);
        const ForwardResult fr = forward(field, grid, params, th);
        double mass = 0.0;
        for (double p : fr.report.fused_probability) mass += p;
        double raw_sum = 0.0;
        for (double r : fr.importance.raw) raw_sum += r;
        CHECK(std::abs(mass - raw_sum) <= 1e-9 * std::max(1.0, mass));
        double norm_sum = 0.0;
        for (double n : fr.importance.normalized) norm_sum += n;
        CHECK(norm_sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("loss terms: hand values") {
    DetectionReport report;
    report.fused_probability = {1.0, 0.8};
    report.n_effect = {1, 2};
    report.detected = {1, 1};
    NodeImportance imp;
    imp.raw = {1.5, 0.5};
    imp.normalized = {0.75, 0.25};

    CHECK(loss_cov(report) == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(loss_ni(imp) == doctest::Approx(0.0625).epsilon(1e-14));

    const TrainingConfig config;
    const LossBreakdown b = make_loss_breakdown(report, imp, config);
    CHECK(b.loss_ni == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(b.loss_cov == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(b.total == doctest::Approx(3e5 * 0.0625 + 1e3 * 0.02).epsilon(1e-14));
    CHECK(b.coverage_rate == 1.0);
}

TEST_CASE("frozen loss equals the forward breakdown at the expansion point") {
    CounterRng rng(1234);
    const EvidentialSensingParams params;
    const DetectionThresholds th;
    const TrainingConfig config;
    const TargetGrid grid = discretize(Region::rectangle(15.0, 12.0), 1.5);

    for (int trial = 0; trial < 20; ++trial) {
        const SensorField field = random_field(rng, 1 + trial % 6, 15.0);
        const ForwardResult fr = forward(field, grid, params, th);
        const LossBreakdown at_point = make_loss_breakdown(fr.report, fr.importance, config);
        const LossBreakdown frozen =
            frozen_loss(field, grid, fr.frozen, config, params, th);
        CHECK(frozen.loss_ni == at_point.loss_ni);
        CHECK(frozen.loss_cov == at_point.loss_cov);
        CHECK(frozen.total == at_point.total);
        CHECK(frozen.coverage_rate == at_point.coverage_rate);
    }
}

TEST_CASE("analytic gradient matches central differences") {
    CounterRng rng(31415);
    const DetectionThresholds th;
    const TrainingConfig config;

    for (int trial = 0; trial < 25; ++trial) {
        EvidentialSensingParams params{1.8, 0.5, trial % 2 == 0 ? 1.0 : 2.0};
        const GradInstance inst = make_grad_instance(rng, params);
        const ForwardResult fr = forward(inst.field, inst.grid, params, th);
        const std::vector<double> analytic =
            gradient(inst.field, inst.grid, fr.frozen, config, params, th);
        const std::vector<double> numeric =
            fd_gradient(inst.field, inst.grid, fr.frozen, config, params, th);
        CHECK(vector_relative_error(analytic, numeric) <= 1e-4);
    }
}

TEST_CASE("gradient: reuse overload agrees with the recomputing one") {
    CounterRng rng(999);
    const EvidentialSensingParams params;
    const DetectionThresholds th;
    const TrainingConfig config;
    const TargetGrid grid = discretize(Region::rectangle(18.0, 18.0), 2.0);

    for (int trial = 0; trial < 10; ++trial) {
        const SensorField field = random_field(rng, 2 + trial % 4, 18.0);
        const ForwardResult fr = forward(field, grid, params, th);
        const std::vector<double> a = gradient(field, grid, fr.frozen, config, params, th);
        const std::vector<double> b =
            gradient(field, grid, fr.frozen, fr.report, fr.importance, config, params);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(std::abs(a[i] - b[i]) <=
                  1e-12 * std::max(1.0, std::abs(a[i])));
    }
}

TEST_CASE("gradient: pull toward an uncovered target, zero on the plateau") {
    const DetectionThresholds th;
    const TrainingConfig config;
    const EvidentialSensingParams params;  // r_s = 4

    TargetGrid grid;
    grid.points = {{0.0, 0.0}};
    grid.mask = {1};
    grid.n_targets = 1;
    grid.bounds = Mbr{{0.0, 0.0}, 12.0, 1.0};
    grid.nx = 1;
    grid.ny = 1;

    SensorField far;
    far.coords = {{10.0, 0.0}};
    const ForwardResult fr = forward(far, grid, params, th);
    const std::vector<double> g = gradient(far, grid, fr.frozen, config, params, th);
    CHECK(g[0] > 0.0);   // moving +x walks away from the target and raises the loss
    CHECK(g[1] == 0.0);  // symmetric in y

    SensorField inside;
    inside.coords = {{2.0, 0.0}};
    const ForwardResult fi = forward(inside, grid, params, th);
    CHECK(fi.report.fused_probability[0] == 1.0);
    const std::vector<double> gz = gradient(inside, grid, fi.frozen, config, params, th);
    CHECK(gz[0] == 0.0);  // certain core is flat
    CHECK(gz[1] == 0.0);
}

TEST_CASE("gradient: mirror symmetry across the x axis") {
    const DetectionThresholds th;
    const TrainingConfig config;
    const EvidentialSensingParams params;
    const TargetGrid grid = discretize(Region::rectangle(20.0, 20.0), 2.0);

    SensorField field;
    field.coords = {{6.0, 7.0}, {6.0, 13.0}, {15.0, 7.0}, {15.0, 13.0}};
    const ForwardResult fr = forward(field, grid, params, th);
    const std::vector<double> g = gradient(field, grid, fr.frozen, config, params, th);
    // Sensors 0/1 and 2/3 mirror about y = 10 over a symmetric grid.
    CHECK(g[0] == doctest::Approx(g[2 * 1 + 0]).epsilon(1e-10));
    CHECK(g[1] == doctest::Approx(-g[2 * 1 + 1]).epsilon(1e-10));
    CHECK(g[2 * 2 + 0] == doctest::Approx(g[2 * 3 + 0]).epsilon(1e-10));
    CHECK(g[2 * 2 + 1] == doctest::Approx(-g[2 * 3 + 1]).epsilon(1e-10));
}

TEST_CASE("stale skeletons are rejected") {
    const EvidentialSensingParams params;
    const DetectionThresholds th;
    const TrainingConfig config;
    const TargetGrid grid = discretize(Region::rectangle(10.0, 10.0), 2.0);
    SensorField field;
    field.coords = {{1.0, 1.0}, {8.0, 8.0}};
    const ForwardResult fr = forward(field, grid, params, th);

    SensorField shrunk;
    shrunk.coords = {{1.0, 1.0}};
    CHECK_THROWS_AS(gradient(shrunk, grid, fr.frozen, config, params, th), StaleStructure);
    CHECK_THROWS_AS(frozen_loss(shrunk, grid, fr.frozen, config, params, th), StaleStructure);
}

TEST_CASE("adam step: bias-corrected first step moves by about the learning rate") {
    TrainingConfig config;
    config.learning_rate = 0.03;
    OptimizerState state;
    SensorField field;
    field.coords = {{5.0, 5.0}};
    const std::vector<double> grad = {2.0, -0.5};

    const SensorField moved = adam_step(field, grad, state, config);
    CHECK(state.step_count == 1);
    // First bias-corrected step is lr * sign(g) up to the epsilon regulator.
    CHECK(moved.coords[0].x == doctest::Approx(5.0 - 0.03).epsilon(1e-7));
    CHECK(moved.coords[0].y == doctest::Approx(5.0 + 0.03).epsilon(1e-7));

    // Zero gradient leaves coordinates in place.
    OptimizerState zstate;
    const SensorField still = adam_step(field, {0.0, 0.0}, zstate, config);
    CHECK(still.coords[0].x == 5.0);
    CHECK(still.coords[0].y == 5.0);

    // Mismatched gradient length is a stale-structure error.
    CHECK_THROWS_AS(adam_step(field, {1.0, 2.0, 3.0}, state, config), StaleStructure);
}

TEST_CASE("adam step: accumulated momentum keeps pushing the same way") {
    TrainingConfig config;
    OptimizerState state;
    SensorField field;
    field.coords = {{0.0, 0.0}};
    double prev_x = 0.0;
    for (int i = 0; i < 5; ++i) {
        field = adam_step(field, {1.0, 0.0}, state, config);
        CHECK(field.coords[0].x < prev_x);
        prev_x = field.coords[0].x;
        CHECK(field.coords[0].y == 0.0);
    }
    CHECK(state.step_count == 5);
}

TEST_CASE("train: epoch bookkeeping and terminal evaluation") {
    const EvidentialSensingParams params;
    const DetectionThresholds th;
    const Region region = Region::rectangle(20.0, 20.0);
    const TargetGrid grid = discretize(region, 2.0);
    CounterRng rng(42);
    const SensorField initial = random_field(rng, 4, 20.0);

    TrainingConfig config;
    config.max_epochs = 12;
    config.early_stop_patience = 0;  // disabled
    const TrainResult res = train(initial, grid, params, th, config);
    CHECK(res.history.size() == 12);

    // The returned field is the one the last history entry describes.
    const ForwardResult fr = forward(res.field, grid, params, th);
    const LossBreakdown again = make_loss_breakdown(fr.report, fr.importance, config);
    CHECK(again.total == res.history.back().total);
    CHECK(again.coverage_rate == res.history.back().coverage_rate);

    // Optimization made things no worse.
    CHECK(res.history.back().total <= res.history.front().total + 1e-9);

    // A single epoch evaluates without stepping.
    TrainingConfig one = config;
    one.max_epochs = 1;
    const TrainResult only_eval = train(initial, grid, params, th, one);
    CHECK(only_eval.history.size() == 1);
    const SensorField clamped = filter(initial, region.mbr());
    for (std::size_t i = 0; i < clamped.size(); ++i) {
        CHECK(only_eval.field.coords[i].x == clamped.coords[i].x);
        CHECK(only_eval.field.coords[i].y == clamped.coords[i].y);
    }
}

TEST_CASE("train: deterministic for identical inputs") {
    const EvidentialSensingParams params;
    const DetectionThresholds th;
    const TargetGrid grid = discretize(Region::rectangle(15.0, 15.0), 1.5);
    CounterRng rng(7);
    const SensorField initial = random_field(rng, 3, 15.0);
    TrainingConfig config;
    config.max_epochs = 20;

    const TrainResult a = train(initial, grid, params, th, config);
    const TrainResult b = train(initial, grid, params, th, config);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i)
        CHECK(a.history[i].total == b.history[i].total);
    for (std::size_t i = 0; i < a.field.size(); ++i) {
        CHECK(a.field.coords[i].x == b.field.coords[i].x);
        CHECK(a.field.coords[i].y == b.field.coords[i].y);
    }
}

TEST_CASE("train: early stop halts a stalled run") {
    const EvidentialSensingParams params;  // r_s = 4 covers the whole 4x4 box
    const DetectionThresholds th;
    const TargetGrid grid = discretize(Region::rectangle(4.0, 4.0), 1.0);
    SensorField center;
    center.coords = {{2.0, 2.0}};  // every target inside the certain core

    TrainingConfig config;
    config.max_epochs = 500;
    config.early_stop_patience = 10;
    const TrainResult res = train(center, grid, params, th, config);
    CHECK(res.history.size() < 500);
    CHECK(res.history.back().total == 0.0);
    CHECK(res.history.back().coverage_rate == 1.0);
    CHECK(res.field.coords[0].x == 2.0);
    CHECK(res.field.coords[0].y == 2.0);
}
