#include "sepchain/sampling.hpp"

#include <numbers>

#include "sepchain/hyp.hpp"

namespace sepchain {

PhasePoint sample_point(const ChainSystem& sys, std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PhasePoint x;
    x.q.resize(static_cast<size_t>(sys.n));
    x.p.resize(static_cast<size_t>(sys.n));
    x.q[0] = 0.5 + 1.5 * unit(rng);
    for (int i = 1; i < sys.n; ++i) {
        double k = detail::angular_level(sys, i + 1).k;
        double half = std::numbers::pi / (2.0 * k);
        x.q[static_cast<size_t>(i)] = (0.1 + 0.8 * unit(rng)) * half;
    }
    for (auto& pi : x.p) pi = -2.0 + 4.0 * unit(rng);
    return x;
}

std::vector<PhasePoint> sample_points(const ChainSystem& sys, int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<PhasePoint> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(sample_point(sys, rng));
    return out;
}

}  // namespace sepchain
