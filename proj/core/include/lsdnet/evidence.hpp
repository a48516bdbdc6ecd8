#pragma once

#include <cstdint>
#include <vector>

namespace lsdnet {

// Gate under which an entropy geometric mean is treated as zero and the
// fusion efficiency defined as 0 (certain running evidence makes every
// further sensor redundant).
inline constexpr double kEntropyEpsilon = 1e-12;

// log2(3): cardinality weight of the two-element frame in the closed-form
// uncertainty used throughout the detection model.
inline constexpr double kLog2Of3 = 1.5849625007211561814537389439478;

// Mass assignment on the binary frame {detected, not-detected}:
// m_d + m_nd + m_theta = 1, each component nonnegative.
struct MassFunction {
    double m_d = 0.0;
    double m_nd = 0.0;
    double m_theta = 1.0;
};

// Mass assignment on a frame of up to 16 elements; focal sets are bitmasks.
// General enough to serve as an independent reference for the binary
// closed forms, and small enough to enumerate exhaustively.
class GeneralMass {
public:
    explicit GeneralMass(int frame_size);

    int frame_size() const { return frame_size_; }
    std::uint32_t full_set() const { return (1u << frame_size_) - 1u; }

    void set(std::uint32_t subset, double mass);
    double mass(std::uint32_t subset) const { return masses_[subset]; }

    // Nonempty subsets carrying nonzero mass.
    std::vector<std::uint32_t> focal_sets() const;

    double total_mass() const;

private:
    int frame_size_;
    std::vector<double> masses_;  // indexed by subset bitmask; [0] stays 0
};

struct CombineResult {
    GeneralMass combined;
    double conflict;  // mass assigned to contradictory pairs before renormalization
};

// Dempster's rule on a shared frame. Throws TotalConflict when the conflict
// mass reaches 1 (within kEntropyEpsilon).
CombineResult dempster_combine_general(const GeneralMass& a, const GeneralMass& b);

// Dempster's rule specialized to two simple-support masses (p, 0, 1-p) and
// (q, 0, 1-q): no conflict arises and the fused detection mass is p + q - pq.
double combine_simple(double p, double q);

// Set-cardinality (Hartley-style) uncertainty of a binary-frame mass, with
// the two-element subset weighted log2(3).
double hartley_entropy(const MassFunction& m);

// Composite mass-vs-cardinality entropy: -sum m(F) log2(m(F) / (2^|F| - 1)).
double belief_entropy(const MassFunction& m);
double belief_entropy(const GeneralMass& m);

// Relative entropy drop of fusing against the geometric mean of the operand
// entropies; 0 when the mean is below kEntropyEpsilon.
double fusion_efficiency_generic(double fused_entropy, double geometric_mean_entropy);

// Closed form of the above for two simple-support masses under the
// cardinality entropy: 1 - sqrt((1-p)(1-q)), with the same epsilon gate.
double fusion_efficiency_hartley(double p, double q);

// Running fusion of simple-support detection masses. The residual
// theta-mass is tracked multiplicatively (prod(1 - q_i)) so long chains keep
// full precision instead of cancelling against 1.
class SimpleFusion {
public:
    // Efficiency of absorbing a sensor with detection mass q into the
    // current state (1 - sqrt(theta * (1-q)) behind the epsilon gate).
    double efficiency_of(double q) const;

    void fuse(double q) {
        theta_ *= (1.0 - q);
        ++count_;
    }

    double fused_prob() const { return 1.0 - theta_; }
    double uncertainty_mass() const { return theta_; }
    int count() const { return count_; }

private:
    double theta_ = 1.0;
    int count_ = 0;
};

}  // namespace lsdnet
