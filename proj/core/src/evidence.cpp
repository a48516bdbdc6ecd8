#include "lsdnet/evidence.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "lsdnet/errors.hpp"

namespace lsdnet {

GeneralMass::GeneralMass(int frame_size) : frame_size_(frame_size) {
    if (frame_size < 1 || frame_size > 16) {
        throw std::invalid_argument("GeneralMass: frame size must be in [1, 16]");
    }
    masses_.assign(std::size_t{1} << frame_size, 0.0);
}

void GeneralMass::set(std::uint32_t subset, double mass) {
    if (subset == 0 || subset > full_set()) {
        throw std::invalid_argument("GeneralMass: focal set must be a nonempty subset of the frame");
    }
    if (mass < 0.0) {
        throw std::invalid_argument("GeneralMass: mass must be nonnegative");
    }
    masses_[subset] = mass;
}

std::vector<std::uint32_t> GeneralMass::focal_sets() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t s = 1; s < masses_.size(); ++s) {
        if (masses_[s] != 0.0) out.push_back(s);
    }
    return out;
}

double GeneralMass::total_mass() const {
    double sum = 0.0;
    for (double m : masses_) sum += m;
    return sum;
}

CombineResult dempster_combine_general(const GeneralMass& a, const GeneralMass& b) {
    if (a.frame_size() != b.frame_size()) {
        throw std::invalid_argument("dempster_combine_general: frames differ");
    }
    const auto fa = a.focal_sets();
    const auto fb = b.focal_sets();

    GeneralMass combined(a.frame_size());
    std::vector<double> acc(std::size_t{1} << a.frame_size(), 0.0);
    double conflict = 0.0;
    for (std::uint32_t sa : fa) {
        for (std::uint32_t sb : fb) {
            const std::uint32_t inter = sa & sb;
            const double product = a.mass(sa) * b.mass(sb);
            if (inter == 0) {
                conflict += product;
            } else {
                acc[inter] += product;
            }
        }
    }
    const double support = 1.0 - conflict;
    if (support < kEntropyEpsilon) {
        throw TotalConflict("dempster_combine_general: operands are in total conflict");
    }
    for (std::uint32_t s = 1; s < acc.size(); ++s) {
        if (acc[s] != 0.0) combined.set(s, acc[s] / support);
    }
    return CombineResult{combined, conflict};
}

double combine_simple(double p, double q) {
    return p + q - p * q;
}

double hartley_entropy(const MassFunction& m) {
    // Singletons carry log2(1) = 0; only the two-element subset contributes.
    return m.m_theta * kLog2Of3;
}

namespace {

// One -m log2(m / (2^|F| - 1)) term, with 0 log 0 taken as 0.
double belief_entropy_term(double mass, int cardinality) {
    if (mass <= 0.0) return 0.0;
    const double denom = std::pow(2.0, cardinality) - 1.0;
    return -mass * std::log2(mass / denom);
}

}  // namespace

double belief_entropy(const MassFunction& m) {
    return belief_entropy_term(m.m_d, 1) + belief_entropy_term(m.m_nd, 1) +
           belief_entropy_term(m.m_theta, 2);
}

double belief_entropy(const GeneralMass& m) {
    double sum = 0.0;
    for (std::uint32_t s : m.focal_sets()) {
        sum += belief_entropy_term(m.mass(s), std::popcount(s));
    }
    return sum;
}

double fusion_efficiency_generic(double fused_entropy, double geometric_mean_entropy) {
    if (geometric_mean_entropy < kEntropyEpsilon) return 0.0;
    return 1.0 - fused_entropy / geometric_mean_entropy;
}

double fusion_efficiency_hartley(double p, double q) {
    const double running = (1.0 - p) * kLog2Of3;
    const double incoming = (1.0 - q) * kLog2Of3;
    const double fused = (1.0 - p) * (1.0 - q) * kLog2Of3;
    return fusion_efficiency_generic(fused, std::sqrt(running * incoming));
}

double SimpleFusion::efficiency_of(double q) const {
    const double running = theta_ * kLog2Of3;
    const double incoming = (1.0 - q) * kLog2Of3;
    const double fused = theta_ * (1.0 - q) * kLog2Of3;
    return fusion_efficiency_generic(fused, std::sqrt(running * incoming));
}

}  // namespace lsdnet
