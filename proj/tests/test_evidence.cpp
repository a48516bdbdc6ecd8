#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lsdnet/errors.hpp"
#include "lsdnet/evidence.hpp"
#include "lsdnet/rng.hpp"

using namespace lsdnet;

namespace {

// Binary frame used throughout: bit 0 = detected, bit 1 = not detected.
constexpr std::uint32_t kD = 0b01;
constexpr std::uint32_t kNd = 0b10;
constexpr std::uint32_t kTheta = 0b11;

GeneralMass simple_support(double p) {
    GeneralMass m(2);
    if (p > 0.0) m.set(kD, p);
    if (p < 1.0) m.set(kTheta, 1.0 - p);
    return m;
}

}  // namespace

TEST_CASE("general dempster combination: conflict and renormalization") {
    GeneralMass a(2);
    a.set(kD, 0.6);
    a.set(kTheta, 0.4);
    GeneralMass b(2);
    b.set(kNd, 0.5);
    b.set(kTheta, 0.5);

    const CombineResult r = dempster_combine_general(a, b);
    CHECK(r.conflict == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(r.combined.mass(kD) == doctest::Approx(0.42857142857142855).epsilon(1e-14));
    CHECK(r.combined.mass(kNd) == doctest::Approx(0.2857142857142857).epsilon(1e-14));
    CHECK(r.combined.mass(kTheta) == doctest::Approx(0.2857142857142857).epsilon(1e-14));
    CHECK(r.combined.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("general dempster combination: total conflict throws") {
    GeneralMass a(2);
    a.set(kD, 1.0);
    GeneralMass b(2);
    b.set(kNd, 1.0);
    CHECK_THROWS_AS(dempster_combine_general(a, b), TotalConflict);
}

TEST_CASE("general dempster combination: frame mismatch and bad focal sets") {
    GeneralMass a(2);
    a.set(kTheta, 1.0);
    GeneralMass b(3);
    b.set(0b111, 1.0);
    CHECK_THROWS_AS(dempster_combine_general(a, b), std::invalid_argument);
    CHECK_THROWS_AS(a.set(0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(a.set(0b100, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(a.set(kD, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(GeneralMass(0), std::invalid_argument);
    CHECK_THROWS_AS(GeneralMass(17), std::invalid_argument);
}

TEST_CASE("combine_simple matches the general rule on simple-support masses") {
    CHECK(combine_simple(0.5, 0.5) == doctest::Approx(0.75).epsilon(1e-15));

    CounterRng rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double p = rng.uniform01();
        const double q = rng.uniform01();
        const CombineResult r = dempster_combine_general(simple_support(p), simple_support(q));
        worst = std::max(worst, std::abs(r.combined.mass(kD) - combine_simple(p, q)));
        worst = std::max(worst, std::abs(r.combined.mass(kTheta) - (1.0 - p) * (1.0 - q)));
        worst = std::max(worst, std::abs(r.combined.mass(kNd)));
        worst = std::max(worst, std::abs(r.conflict));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("cardinality entropy of binary masses") {
    CHECK(hartley_entropy(MassFunction{0.3, 0.0, 0.7}) ==
          doctest::Approx(1.1094737505048091).epsilon(1e-14));
    CHECK(hartley_entropy(MassFunction{1.0, 0.0, 0.0}) == 0.0);
    CHECK(hartley_entropy(MassFunction{0.0, 0.0, 1.0}) ==
          doctest::Approx(1.584962500721156).epsilon(1e-14));
    // Singleton masses carry zero set-uncertainty regardless of their split.
    CHECK(hartley_entropy(MassFunction{0.2, 0.5, 0.3}) ==
          hartley_entropy(MassFunction{0.7, 0.0, 0.3}));
}

TEST_CASE("belief entropy: closed-form values and the 0 log 0 convention") {
    CHECK(belief_entropy(MassFunction{0.25, 0.0, 0.75}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(belief_entropy(MassFunction{1.0, 0.0, 0.0}) == 0.0);
    CHECK(belief_entropy(MassFunction{0.0, 0.0, 1.0}) ==
          doctest::Approx(1.584962500721156).epsilon(1e-14));

    GeneralMass g(2);
    g.set(kD, 0.25);
    g.set(kTheta, 0.75);
    CHECK(belief_entropy(g) == belief_entropy(MassFunction{0.25, 0.0, 0.75}));
}

TEST_CASE("belief entropy curve peaks inside the family m(D)=1-a, m(Theta)=a") {
    double best_a = 0.0;
    double best_val = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double a = static_cast<double>(i) / 1000.0;
        const double val = belief_entropy(MassFunction{1.0 - a, 0.0, a});
        if (val > best_val) {
            best_val = val;
            best_a = a;
        }
    }
    CHECK(best_a == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(best_val == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fusion efficiency: closed form, gates, and bounds") {
    CHECK(fusion_efficiency_hartley(0.75, 0.75) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(fusion_efficiency_hartley(0.3, 0.6) ==
          doctest::Approx(0.47084973778708183).epsilon(1e-12));
    // Zero-information operands fuse with zero efficiency.
    CHECK(fusion_efficiency_hartley(0.0, 0.0) == 0.0);
    // A certain operand zeroes the geometric mean, so the gate returns 0.
    CHECK(fusion_efficiency_hartley(1.0, 0.5) == 0.0);
    CHECK(fusion_efficiency_hartley(0.5, 1.0) == 0.0);
    CHECK(fusion_efficiency_generic(1.0, 0.5e-12) == 0.0);
    CHECK(fusion_efficiency_generic(0.5, 1.0) == 0.5);

    CounterRng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double p = rng.uniform01();
        const double q = rng.uniform01();
        const double eta = fusion_efficiency_hartley(p, q);
        CHECK(eta >= 0.0);
        CHECK(eta < 1.0);
    }
}

TEST_CASE("running fusion tracks the simple-support chain") {
    SimpleFusion fusion;
    fusion.fuse(0.5);
    CHECK(fusion.fused_prob() == 0.5);
    CHECK(fusion.efficiency_of(0.5) == doctest::Approx(0.5).epsilon(1e-12));
    fusion.fuse(0.5);
    CHECK(fusion.fused_prob() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(fusion.efficiency_of(0.1) ==
          doctest::Approx(0.5256583509747431).epsilon(1e-12));
    fusion.fuse(0.1);
    CHECK(fusion.count() == 3);
    CHECK(fusion.fused_prob() == doctest::Approx(0.775).epsilon(1e-12));

    // The multiplicative chain agrees with iterated combine_simple.
    CounterRng rng(99);
    for (int i = 0; i < 1000; ++i) {
        SimpleFusion chain;
        double p = 0.0;
        for (int k = 0; k < 8; ++k) {
            const double q = rng.uniform01();
            p = k == 0 ? q : combine_simple(p, q);
            chain.fuse(q);
        }
        CHECK(std::abs(chain.fused_prob() - p) <= 1e-12);
    }
}

TEST_CASE("monotonicity: more detection mass never raises set-uncertainty") {
    CounterRng rng(11);
    for (int i = 0; i < 10000; ++i) {
        double p1 = rng.uniform01();
        double p2 = rng.uniform01();
        if (p1 > p2) std::swap(p1, p2);
        CHECK(hartley_entropy(MassFunction{p2, 0.0, 1.0 - p2}) <=
              hartley_entropy(MassFunction{p1, 0.0, 1.0 - p1}));
    }
}

TEST_CASE("monotonicity: fusing never raises set-uncertainty above an operand") {
    CounterRng rng(12);
    for (int i = 0; i < 10000; ++i) {
        const double p = rng.uniform01();
        const double q = rng.uniform01();
        const double fused_theta = (1.0 - p) * (1.0 - q);
        const double fused_e = hartley_entropy(MassFunction{1.0 - fused_theta, 0.0, fused_theta});
        CHECK(fused_e <= hartley_entropy(MassFunction{p, 0.0, 1.0 - p}));
        CHECK(fused_e <= hartley_entropy(MassFunction{q, 0.0, 1.0 - q}));
    }
}
